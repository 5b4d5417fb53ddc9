#pragma once

#include <random>

#include "tpl/projection.hpp"

namespace tpl {

using Rng = std::mt19937_64;

/// Entries with independent standard normal real and imaginary parts.
ComplexMatrix random_gaussian(Index rows, Index cols, Rng& rng);

/// Orthonormalized Gaussian n x k matrix (thin Householder Q).
ComplexMatrix random_frame(Index n, Index k, Rng& rng);

Projection random_projection(Index n, Index k, Rng& rng, const TolerancePolicy& tol = {});

Index uniform_index(Index lo, Index hi, Rng& rng);  // inclusive range

}  // namespace tpl
