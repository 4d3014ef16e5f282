#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gradgeom/model.hpp"

namespace gradgeom::cli {

// exit codes: 0 success, 1 usage error, 2 numerical/domain error, 3 I/O error
int run(const std::vector<std::string>& argv);
int run(int argc, const char* const* argv);

// synthetic task pair: Gaussian inputs, linear teachers differing by delta
struct GenSpec {
    std::size_t n = 100;
    std::size_t d_in = 8;
    std::size_t d_out = 4;
    double delta = 0.0;      // teacher-weight shift between the two tasks
    double noise_std = 0.0;  // observation noise
};

// generates the (task_a, task_b) pair; delta = 0 makes the tasks
// identically distributed
std::pair<Dataset, Dataset> gen_task_pair(const GenSpec& spec, std::uint64_t seed);

}  // namespace gradgeom::cli
