#pragma once

#include "cfheat/temporal_solver.hpp"

#include <Eigen/Core>

#include <map>
#include <span>
#include <string>
#include <vector>

namespace cfheat {

/// u(t, x) on a uniform tensor grid together with the modal traces it was
/// synthesised from. Boundary columns are exactly zero.
struct SolutionGrid {
    std::vector<double> t;                 // nt + 1 nodes on [0, q]
    std::vector<double> x;                 // nx + 1 nodes on [0, 1]
    Eigen::MatrixXd u;                     // u(t_i, x_j)
    std::vector<ModalSeries> modes;        // T_m(t_i)
    std::map<std::string, std::string> provenance;
};

std::vector<double> uniform_nodes(double a, double b, std::size_t intervals);

SolutionGrid synthesize_grid(std::span<const TemporalSolution> solutions, double horizon,
                             std::size_t nt, std::size_t nx);

}  // namespace cfheat
