#pragma once

#include "eqcap/error.hpp"
#include "eqcap/rational.hpp"
#include "eqcap/interval_union.hpp"
#include "eqcap/polynomial.hpp"
#include "eqcap/roots.hpp"
#include "eqcap/measure.hpp"
#include "eqcap/quadrature.hpp"
#include "eqcap/density.hpp"
#include "eqcap/parallel.hpp"
#include "eqcap/capacity.hpp"
#include "eqcap/fekete.hpp"
#include "eqcap/remez.hpp"
#include "eqcap/abel.hpp"
#include "eqcap/pellabel.hpp"
#include "eqcap/robinson.hpp"
#include "eqcap/weil.hpp"
#include "eqcap/io.hpp"
#include "eqcap/cli.hpp"
