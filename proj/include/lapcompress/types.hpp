#pragma once

#include <Eigen/Dense>

namespace lapcompress {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// One network state vector, tagged with the time index it was recorded at
// and the simulation instance (or dataset row) it belongs to.
struct Snapshot {
    Vector values;
    int time_index = 0;
    int instance_id = 0;
};

// Throws ValidationError if the snapshot contains non-finite entries.
void validate_snapshot(const Snapshot& s);

}  // namespace lapcompress
