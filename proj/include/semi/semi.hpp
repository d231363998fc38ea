#pragma once

#include "semi/error.hpp"
#include "semi/rational.hpp"
#include "semi/grassmann.hpp"
#include "semi/sparse_elimination.hpp"
#include "semi/equation_solver.hpp"
#include "semi/superpoly.hpp"
#include "semi/supermap.hpp"
#include "semi/jacobian.hpp"
#include "semi/map_equation.hpp"
#include "semi/semiatlas.hpp"
#include "semi/semibundle.hpp"
#include "semi/semihomotopy.hpp"
#include "semi/format.hpp"
#include "semi/model.hpp"
