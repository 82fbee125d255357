#ifndef CONGREL_CONGREL_HPP
#define CONGREL_CONGREL_HPP

#include "algebra.hpp"
#include "binrel.hpp"
#include "corpus.hpp"
#include "dsl.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "partition.hpp"
#include "relations.hpp"
#include "report.hpp"
#include "theorems.hpp"

#endif // CONGREL_CONGREL_HPP
