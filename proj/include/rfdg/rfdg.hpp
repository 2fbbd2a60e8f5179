#pragma once

#include "rfdg/error.hpp"
#include "rfdg/graph.hpp"
#include "rfdg/analysis.hpp"
#include "rfdg/gauss_rational.hpp"
#include "rfdg/symbolic.hpp"
#include "rfdg/repr.hpp"
#include "rfdg/amalgam.hpp"
#include "rfdg/digest.hpp"
#include "rfdg/rfd.hpp"
