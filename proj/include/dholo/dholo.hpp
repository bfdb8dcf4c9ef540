#pragma once

#include "core.hpp"
#include "lattice.hpp"
#include "quad_equations.hpp"
#include "graph.hpp"
#include "strips.hpp"
#include "labeling.hpp"
#include "linear.hpp"
#include "special.hpp"
#include "integrability.hpp"
#include "nonlinear.hpp"
#include "linearization.hpp"
#include "io/document.hpp"
#include "io/generate.hpp"
#include "io/svg.hpp"
