#pragma once

#include "millscale/constant_digits.hpp"
#include "millscale/error.hpp"
#include "millscale/fixed_arith.hpp"
#include "millscale/io.hpp"
#include "millscale/mills_sequence.hpp"
#include "millscale/natural.hpp"
#include "millscale/primality.hpp"
#include "millscale/prime_search.hpp"
