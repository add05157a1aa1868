#pragma once

#include "concomitant/concomitants.hpp"
#include "concomitant/expression.hpp"
#include "concomitant/identities.hpp"
#include "concomitant/invariants.hpp"
#include "concomitant/io.hpp"
#include "concomitant/linalg.hpp"
#include "concomitant/mattuple.hpp"
#include "concomitant/ncpoly.hpp"
#include "concomitant/rng.hpp"
#include "concomitant/structure.hpp"
