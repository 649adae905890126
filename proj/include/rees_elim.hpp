#pragma once

#include "rees/error.hpp"
#include "rees/field.hpp"
#include "rees/polynomial.hpp"
#include "rees/parse.hpp"
#include "rees/gcd.hpp"
#include "rees/groebner.hpp"
#include "rees/matrix.hpp"
#include "rees/rees_algebra.hpp"
#include "rees/elimination.hpp"
#include "rees/transform.hpp"
#include "rees/invariants.hpp"
#include "rees/session.hpp"
