#ifndef CONGREL_TOOLS_CLI_HPP
#define CONGREL_TOOLS_CLI_HPP

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <congrel/congrel.hpp>

namespace congrel::cli {

enum ExitCode : int { ok = 0, violation = 1, usage = 2 };

/// `builtin:<name>` or a path to an algebra JSON file.
inline FiniteAlgebra resolve_algebra(const std::string &spec) {
  constexpr std::string_view prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0)
    return corpus::builtin(spec.substr(prefix.size()));
  std::ifstream in(spec);
  if (!in)
    throw InputError("cannot read algebra file '" + spec + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  FiniteAlgebra A = load_algebra(buf.str());
  if (A.name().empty())
    return FiniteAlgebra(spec, A.size(), {A.operations().begin(), A.operations().end()});
  return A;
}

inline std::vector<std::size_t> parse_numbers(const std::string &text, std::size_t expected, const char *what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw InputError(std::string("malformed ") + what + " '" + text + "'");
    out.push_back(v);
  }
  if (out.size() != expected)
    throw InputError(std::string(what) + " needs " + std::to_string(expected) + " comma-separated numbers");
  return out;
}

/// Relation on A given as a JSON literal, `principal:a,b` (diagonal plus
/// (a,b)), `cg:a,b` (congruence generated by (a,b)), `0` or `1`.
inline BinRel resolve_relation(const std::string &spec, const FiniteAlgebra &A) {
  const std::size_t n = A.size();
  BinRel r;
  if (spec == "0") {
    r = BinRel::diagonal(n);
  } else if (spec == "1") {
    r = BinRel::full(n);
  } else if (spec.rfind("principal:", 0) == 0 || spec.rfind("cg:", 0) == 0) {
    const bool principal = spec[0] == 'p';
    const auto ab = parse_numbers(spec.substr(spec.find(':') + 1), 2, "relation pair");
    if (ab[0] >= n || ab[1] >= n)
      throw InputError("relation pair out of range in '" + spec + "'");
    BinRel gen = BinRel::diagonal(n);
    gen.set(ab[0], ab[1]);
    r = principal ? gen : cg(gen, A).to_relation();
  } else {
    r = parse_relation(spec);
  }
  if (r.size() != n)
    throw InputError("relation '" + spec + "' has size " + std::to_string(r.size()) + ", algebra has " +
                     std::to_string(n));
  return r;
}

struct Output {
  std::ostream &out;
  bool json = false;
  bool timing = false;

  void report(const CheckReport &r) const {
    if (json)
      out << to_json(r, timing).dump() << '\n';
    else
      out << to_text(r, timing);
    out.flush();
  }
};

/// Runs the command line (without the program name). Returns the exit code.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Finite-algebra relation calculus and intersection-property checker", "congrel"};
  app.require_subcommand(1);
  app.fallthrough();

  bool json = false, timing = false;
  std::size_t jobs = 0;
  app.add_flag("--json", json, "Emit JSON reports");
  app.add_flag("--timing", timing, "Include wall-clock times in reports");
  app.add_option("--jobs", jobs, "Worker threads (0 = available parallelism)");

  std::string algebra_spec;
  std::size_t max_violations = 10;

  auto *hyp = app.add_subcommand("check-hypothesis", "Inclusion hypothesis on all 4-generated subalgebras of A x A");
  std::optional<std::size_t> seed_limit;
  hyp->add_option("algebra", algebra_spec, "File path or builtin:<name>")->required();
  hyp->add_option("--seed-limit", seed_limit, "Cap on generator 4-multisets visited");
  hyp->add_option("--max-violations", max_violations, "Violations kept in the report");

  auto *mod = app.add_subcommand("check-modularity", "Modular law on all 4-generated subalgebras of A x A");
  mod->add_option("algebra", algebra_spec, "File path or builtin:<name>")->required();
  mod->add_option("--seed-limit", seed_limit, "Cap on generator 4-multisets visited");
  mod->add_option("--max-violations", max_violations, "Violations kept in the report");

  std::string theorem = "all", strategy = "principal";
  std::uint64_t seed = 7;
  std::size_t samples = 1000;
  auto add_sweep_options = [&](CLI::App *sub) {
    sub->add_option("--strategy", strategy, "exhaust | principal | sample")
        ->check(CLI::IsMember({"exhaust", "principal", "sample"}));
    sub->add_option("--seed", seed, "Seed for sampled relations");
    sub->add_option("--samples", samples, "Random relation tuples for principal/sample");
    sub->add_option("--max-violations", max_violations, "Violations kept per report");
  };

  auto *verify = app.add_subcommand("verify", "Sweep one or all of the four theorems");
  verify->add_option("--theorem", theorem, "subrel | subrelpiu | wtip | rr | all")
      ->check(CLI::IsMember({"subrel", "subrelpiu", "wtip", "rr", "all"}));
  add_sweep_options(verify);
  verify->add_option("algebra", algebra_spec, "File path or builtin:<name>")->required();

  auto *witness = app.add_subcommand("witness", "Extract the alternating witness chain for (a,c)");
  std::string alpha_spec, abc, r_spec, s_spec;
  witness->add_option("--alpha", alpha_spec, "Congruence: JSON literal, cg:a,b, 0 or 1")->required();
  witness->add_option("--abc", abc, "a,b,c")->required();
  witness->add_option("--R", r_spec, "Reflexive relation R")->required();
  witness->add_option("--S", s_spec, "Reflexive relation S")->required();
  witness->add_option("algebra", algebra_spec, "File path or builtin:<name>")->required();

  auto *search = app.add_subcommand("search", "Random search for a counterexample to any of the four theorems");
  std::size_t budget = 1000;
  search->add_option("algebra", algebra_spec, "File path or builtin:<name>")->required();
  search->add_option("--budget", budget, "Instances to try");
  search->add_option("--seed", seed, "Sampling seed");

  auto *eval = app.add_subcommand("eval", "Check a quantified relational identity");
  std::string statement_text;
  eval->add_option("statement", statement_text, "e.g. \"forall a:Cong, T:Tol . a & T* = (a & T)*\"")->required();
  eval->add_option("algebra", algebra_spec, "File path or builtin:<name>")->required();
  add_sweep_options(eval);

  auto *corpus_cmd = app.add_subcommand("corpus", "Built-in algebras");
  std::string corpus_action;
  corpus_cmd->add_option("action", corpus_action, "list")->required()->check(CLI::IsMember({"list"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? ExitCode::ok : ExitCode::usage;
  }

  const Output output{out, json, timing};
  try {
    Limits limits = Limits::from_env();

    if (corpus_cmd->parsed()) {
      if (json) {
        out << nlohmann::json(corpus::names()).dump() << '\n';
      } else {
        for (const auto &n : corpus::names()) {
          const auto A = corpus::builtin(n);
          out << n << "  (size " << A.size() << ", " << A.operations().size() << " operations)\n";
        }
      }
      return ExitCode::ok;
    }

    const FiniteAlgebra A = resolve_algebra(algebra_spec);

    if (hyp->parsed() || mod->parsed()) {
      SubsquareCheckOptions opts;
      opts.seed_limit = seed_limit;
      opts.jobs = jobs;
      opts.max_violations = max_violations;
      opts.limits = limits;
      const auto rep = hyp->parsed() ? check_hypothesis(A, opts) : check_modularity_subsquares(A, opts);
      output.report(rep);
      return rep.holds() ? ExitCode::ok : ExitCode::violation;
    }

    SweepOptions sweep_opts;
    sweep_opts.strategy = strategy_from_string(strategy);
    sweep_opts.seed = seed;
    sweep_opts.samples = samples;
    sweep_opts.jobs = jobs;
    sweep_opts.max_violations = max_violations;
    sweep_opts.limits = limits;

    if (verify->parsed()) {
      bool any_violation = false;
      auto emit = [&](const CheckReport &r) {
        output.report(r);
        any_violation = any_violation || !r.holds();
      };
      if (theorem == "all")
        sweep(A, sweep_opts, emit);
      else
        emit(sweep_theorem(A, theorem_from_string(theorem), sweep_opts));
      return any_violation ? ExitCode::violation : ExitCode::ok;
    }

    if (eval->parsed()) {
      const auto stmt = dsl::parse(statement_text);
      const auto rep = dsl::check_statement(A, stmt, sweep_opts);
      output.report(rep);
      return rep.holds() ? ExitCode::ok : ExitCode::violation;
    }

    if (search->parsed()) {
      const auto v = search_counterexample(A, budget, seed, limits);
      if (json) {
        nlohmann::ordered_json doc;
        doc["algebra"] = A.name();
        doc["budget"] = budget;
        doc["seed"] = seed;
        doc["result"] = v ? "found" : "none";
        doc["violation"] = v ? to_json(*v) : nlohmann::ordered_json(nullptr);
        if (v)
          doc["theorem"] = v->theorem;
        out << doc.dump() << '\n';
      } else if (v) {
        out << "counterexample to " << v->theorem << " on " << A.name() << ":\n" << to_text(*v);
      } else {
        out << "no counterexample on " << A.name() << " within " << budget << " instances\n";
      }
      return v ? ExitCode::violation : ExitCode::ok;
    }

    if (witness->parsed()) {
      const auto abc_values = parse_numbers(abc, 3, "--abc");
      for (auto v : abc_values)
        if (v >= A.size())
          throw InputError("--abc element out of range");
      const BinRel alpha_rel = resolve_relation(alpha_spec, A);
      if (!classify(alpha_rel, A).is_congruence)
        throw InputError("--alpha is not a congruence of " + A.name());
      const Partition alpha = Partition::from_relation(alpha_rel);
      const BinRel R = resolve_relation(r_spec, A);
      const BinRel S = resolve_relation(s_spec, A);
      const auto a = static_cast<Element>(abc_values[0]);
      const auto b = static_cast<Element>(abc_values[1]);
      const auto c = static_cast<Element>(abc_values[2]);
      const auto outcome = witness_chain(A, alpha, a, b, c, R, S);
      std::optional<std::string> invalid;
      if (outcome.found())
        invalid = validate_chain(A, alpha, R, S, a, c, *outcome.chain);
      if (json) {
        nlohmann::ordered_json doc;
        doc["algebra"] = A.name();
        doc["found"] = outcome.found();
        if (outcome.found()) {
          const auto &ch = *outcome.chain;
          auto gens = nlohmann::ordered_json::array();
          for (auto [x, y] : ch.generators)
            gens.push_back({x, y});
          doc["generators"] = gens;
          doc["subalgebra_size"] = ch.subsquare.size();
          auto pairs = nlohmann::ordered_json::array();
          for (std::size_t i = 0; i <= ch.length(); ++i)
            pairs.push_back({ch.x(i), ch.y(i)});
          doc["chain"] = pairs;
          auto links = nlohmann::ordered_json::array();
          for (auto k : ch.links)
            links.push_back(k == LinkKind::y_step ? "y" : "x");
          doc["links"] = links;
          doc["valid"] = !invalid;
          if (invalid)
            doc["validation_error"] = *invalid;
        } else {
          doc["diagnostic"] = outcome.diagnostic;
        }
        out << doc.dump() << '\n';
      } else if (outcome.found()) {
        const auto &ch = *outcome.chain;
        out << "subalgebra generated by (" << a << "," << a << ") (" << a << "," << b << ") (" << c << "," << b
            << ") (" << c << "," << c << "): " << ch.subsquare.size() << " elements\n";
        for (std::size_t i = 0; i <= ch.length(); ++i) {
          out << "  " << i << ": (" << ch.x(i) << "," << ch.y(i) << ")";
          if (i < ch.length())
            out << (ch.links[i] == LinkKind::y_step ? "  --y-->" : "  --x-->");
          out << '\n';
        }
        out << (invalid ? "chain INVALID: " + *invalid : std::string("chain re-validated")) << '\n';
      } else {
        out << "no chain: " << outcome.diagnostic << '\n';
      }
      if (!outcome.found() || invalid)
        return ExitCode::violation;
      return ExitCode::ok;
    }
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::usage;
  }
  return ExitCode::usage;
}

} // namespace congrel::cli

#endif // CONGREL_TOOLS_CLI_HPP
