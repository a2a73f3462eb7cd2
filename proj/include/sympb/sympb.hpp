#pragma once

// Umbrella header.
#include <sympb/plane.hpp>
#include <sympb/support.hpp>
#include <sympb/trapezoid.hpp>
#include <sympb/geometry.hpp>
#include <sympb/roots.hpp>
#include <sympb/dynamics.hpp>
#include <sympb/variational.hpp>
#include <sympb/gauss_legendre.hpp>
#include <sympb/quadrature.hpp>
#include <sympb/normalization.hpp>
#include <sympb/domain_io.hpp>
#include <sympb/pipeline.hpp>
