#pragma once

#include <cmath>

#include "lapcompress/types.hpp"

namespace lapcompress::detail {

// Shared column sign convention: the largest-magnitude entry (lowest index
// on ties) is made positive.
inline void fix_column_sign(Eigen::Ref<Vector> col) {
    Eigen::Index lead = 0;
    double best = std::abs(col[0]);
    for (Eigen::Index i = 1; i < col.size(); ++i) {
        double m = std::abs(col[i]);
        if (m > best) {
            best = m;
            lead = i;
        }
    }
    if (col[lead] < 0.0) col = -col;
}

}  // namespace lapcompress::detail
