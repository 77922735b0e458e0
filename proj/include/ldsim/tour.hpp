#pragma once

#include <vector>

#include <Eigen/Dense>

namespace ldsim {

// Point counts up to this limit are solved exactly; larger instances fall
// back to the deterministic heuristic.
inline constexpr std::size_t kExactTourLimit = 10;

/// Symmetric pairwise Euclidean distances between the given points.
Eigen::MatrixXd pairwise_distances(const std::vector<Eigen::VectorXd>& points);

/// Exact shortest closed-tour length (Held-Karp dynamic programming).
double tour_length_exact(const Eigen::MatrixXd& dist);

/// Nearest-neighbour construction plus 2-opt refinement, scanning edge
/// pairs in fixed index order. Deterministic; never shorter than exact.
double tour_length_heuristic(const Eigen::MatrixXd& dist);

/// Shortest closed tour visiting every point: exact up to kExactTourLimit
/// points, heuristic beyond. 0 points -> 0; 1 point -> 0; 2 points -> 2d.
double shortest_tour_length(const Eigen::MatrixXd& dist);

double shortest_tour_length(const std::vector<Eigen::VectorXd>& points);

} // namespace ldsim
