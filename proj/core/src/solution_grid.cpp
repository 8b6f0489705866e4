#include <cmath>
#include "cfheat/solution_grid.hpp"

#include <set>
#include <string>

namespace cfheat {

std::vector<double> uniform_nodes(double a, double b, std::size_t intervals) {
    if (intervals < 1) {
        throw ResolutionError("uniform grid needs at least one interval");
    }
    std::vector<double> v(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        v[i] = i == intervals ? b
                              : a + (b - a) * static_cast<double>(i) / static_cast<double>(intervals);
    }
    return v;
}

SolutionGrid synthesize_grid(std::span<const TemporalSolution> solutions, double horizon,
                             std::size_t nt, std::size_t nx) {
    if (solutions.empty()) {
        throw MismatchError("no modal solutions to synthesise");
    }
    SolutionGrid grid;
    grid.t = uniform_nodes(0.0, horizon, nt);
    grid.x = uniform_nodes(0.0, 1.0, nx);
    std::set<std::string> kinds;
    for (const auto& s : solutions) {
        if (std::abs(s.horizon() - horizon) > 1e-12 * horizon) {
            throw MismatchError("modal solution horizon differs from the grid horizon");
        }
        ModalSeries series;
        series.m = s.mode();
        series.times = grid.t;
        series.values.reserve(grid.t.size());
        for (double t : grid.t) {
            series.values.push_back(s(t));
        }
        grid.modes.push_back(std::move(series));
        kinds.insert(std::string(to_string(s.provenance())));
    }
    grid.u = synthesize(grid.modes, grid.x);
    grid.u.col(0).setZero();
    grid.u.col(grid.u.cols() - 1).setZero();

    std::string solver;
    for (const auto& k : kinds) {
        solver += solver.empty() ? k : "+" + k;
    }
    grid.provenance["solver"] = solver;
    grid.provenance["modes"] = std::to_string(solutions.size());
    grid.provenance["nt"] = std::to_string(nt);
    grid.provenance["nx"] = std::to_string(nx);
    return grid;
}

}  // namespace cfheat
