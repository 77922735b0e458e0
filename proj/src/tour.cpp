#include "ldsim/tour.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "ldsim/errors.hpp"

namespace ldsim {

Eigen::MatrixXd pairwise_distances(const std::vector<Eigen::VectorXd>& points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    for (const auto& p : points)
        if (p.size() != points.front().size())
            throw DimensionError("points of a tour must share one dimension");
    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = (points[static_cast<std::size_t>(i)] -
                              points[static_cast<std::size_t>(j)])
                                 .norm();
            dist(i, j) = d;
            dist(j, i) = d;
        }
    return dist;
}

double tour_length_exact(const Eigen::MatrixXd& dist) {
    const auto n = static_cast<std::size_t>(dist.rows());
    if (n <= 1) return 0.0;
    if (n == 2) return 2.0 * dist(0, 1);

    // dp[mask][j]: shortest path from 0 through the cities in mask
    // (subset of {1..n-1}), ending at city j+1.
    const std::size_t m = n - 1;
    const std::size_t full = (std::size_t{1} << m) - 1;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> dp(full + 1, std::vector<double>(m, inf));

    for (std::size_t j = 0; j < m; ++j)
        dp[std::size_t{1} << j][j] = dist(0, static_cast<Eigen::Index>(j + 1));

    for (std::size_t mask = 1; mask <= full; ++mask) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            const double cur = dp[mask][j];
            if (cur == inf) continue;
            for (std::size_t k = 0; k < m; ++k) {
                if (mask & (std::size_t{1} << k)) continue;
                const std::size_t next = mask | (std::size_t{1} << k);
                const double cand =
                    cur + dist(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(k + 1));
                if (cand < dp[next][k]) dp[next][k] = cand;
            }
        }
    }

    double best = inf;
    for (std::size_t j = 0; j < m; ++j)
        best = std::min(best, dp[full][j] + dist(static_cast<Eigen::Index>(j + 1), 0));
    return best;
}

double tour_length_heuristic(const Eigen::MatrixXd& dist) {
    const auto n = static_cast<std::size_t>(dist.rows());
    if (n <= 1) return 0.0;
    if (n == 2) return 2.0 * dist(0, 1);

    // Nearest-neighbour construction from city 0; ties go to the lower id.
    std::vector<std::size_t> tour;
    tour.reserve(n);
    std::vector<bool> used(n, false);
    tour.push_back(0);
    used[0] = true;
    while (tour.size() < n) {
        const auto cur = static_cast<Eigen::Index>(tour.back());
        std::size_t best = n;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double d = dist(cur, static_cast<Eigen::Index>(j));
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        tour.push_back(best);
        used[best] = true;
    }

    auto leg = [&](std::size_t a, std::size_t b) {
        return dist(static_cast<Eigen::Index>(tour[a]), static_cast<Eigen::Index>(tour[b]));
    };

    // First-improvement 2-opt over edge pairs in fixed index order.
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t k = i + 1; k < n; ++k) {
                const std::size_t a = i, b = i + 1;
                const std::size_t c = k, d = (k + 1) % n;
                if (d == a) continue;
                const double before = leg(a, b) + leg(c, d);
                const double after = leg(a, c) + leg(b, d);
                if (after < before - 1e-12) {
                    std::reverse(tour.begin() + static_cast<std::ptrdiff_t>(b),
                                 tour.begin() + static_cast<std::ptrdiff_t>(c) + 1);
                    improved = true;
                }
            }
        }
    }

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += leg(i, (i + 1) % n);
    return total;
}

double shortest_tour_length(const Eigen::MatrixXd& dist) {
    if (dist.rows() != dist.cols()) throw DimensionError("distance matrix must be square");
    const auto n = static_cast<std::size_t>(dist.rows());
    if (n <= kExactTourLimit) return tour_length_exact(dist);
    return tour_length_heuristic(dist);
}

double shortest_tour_length(const std::vector<Eigen::VectorXd>& points) {
    return shortest_tour_length(pairwise_distances(points));
}

} // namespace ldsim
