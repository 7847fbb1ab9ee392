#pragma once

#include "kummer/arith.hpp"
#include "kummer/bh_experiment.hpp"
#include "kummer/characters.hpp"
#include "kummer/errors.hpp"
#include "kummer/hilbert.hpp"
#include "kummer/large_sieve.hpp"
#include "kummer/parallel.hpp"
#include "kummer/quadratic_field.hpp"
#include "kummer/residue_symbol.hpp"
#include "kummer/singular_series.hpp"
#include "kummer/varieties.hpp"
