#pragma once

#include "ggbm/errors.hpp"

namespace ggbm {

// Accuracy controls for series evaluation (Mittag-Leffler family, Kummer 1F1,
// mixed-kernel moment series).
struct AccuracyBudget {
    double abs_tol = 1e-13; // absolute tolerance for series tails
    int max_terms = 600;    // series truncation cap
    double z_switch = 5.0;  // series vs. asymptotic switchover for ml1/ml2

    void validate() const {
        if (!(abs_tol > 0.0)) throw domain_error("accuracy: abs_tol must be > 0");
        if (max_terms < 1) throw domain_error("accuracy: max_terms must be >= 1");
        if (!(z_switch > 0.0)) throw domain_error("accuracy: z_switch must be > 0");
    }
};

} // namespace ggbm
