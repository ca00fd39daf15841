#pragma once

#include "error.hpp"
#include "invariants.hpp"
#include "periods.hpp"
#include "weierstrass.hpp"
#include "mechanics.hpp"
#include "lame.hpp"
