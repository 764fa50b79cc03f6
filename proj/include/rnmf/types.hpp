#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace rnmf {

/// Sorted (row, col) entry positions, row-major order.
using IndexSet = std::vector<std::pair<std::size_t, std::size_t>>;

enum class Termination { converged, max_iter };

inline const char* to_string(Termination t) {
    return t == Termination::converged ? "converged" : "max_iter";
}

}  // namespace rnmf
