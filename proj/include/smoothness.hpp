#pragma once

#include "smoothness/approx.hpp"
#include "smoothness/errors.hpp"
#include "smoothness/function.hpp"
#include "smoothness/jacobi.hpp"
#include "smoothness/quadrature.hpp"
#include "smoothness/space.hpp"
#include "smoothness/translation.hpp"
