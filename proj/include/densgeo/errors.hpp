#ifndef DENSGEO_ERRORS_HPP
#define DENSGEO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace densgeo {

/** Base class for all numerical/domain failures raised by the library.
 * CLI maps these to exit code 2; usage errors (bad config) map to exit 1. */
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct wrong_dimension_error : error {
    explicit wrong_dimension_error(const std::string& msg) : error(msg) {}
};

struct mean_not_zero_error : error {
    explicit mean_not_zero_error(const std::string& msg) : error(msg) {}
};

struct positivity_lost_error : error {
    explicit positivity_lost_error(const std::string& msg) : error(msg) {}
};

struct past_breakdown_error : error {
    explicit past_breakdown_error(const std::string& msg) : error(msg) {}
};

// kappa = 0: stationary solution, infinite lifespan, no breakdown time.
struct stationary_flow_error : error {
    explicit stationary_flow_error(const std::string& msg) : error(msg) {}
};

struct blowup_error : error {
    explicit blowup_error(const std::string& msg) : error(msg) {}
};

struct monotonicity_lost_error : error {
    explicit monotonicity_lost_error(const std::string& msg) : error(msg) {}
};

struct inverse_diverged_error : error {
    explicit inverse_diverged_error(const std::string& msg) : error(msg) {}
};

struct non_diffeomorphic_error : error {
    explicit non_diffeomorphic_error(const std::string& msg) : error(msg) {}
};

struct zero_node_error : error {
    explicit zero_node_error(const std::string& msg) : error(msg) {}
};

struct winding_error : error {
    int winding;
    winding_error(const std::string& msg, int w) : error(msg), winding(w) {}
};

struct constraint_violated_error : error {
    explicit constraint_violated_error(const std::string& msg) : error(msg) {}
};

struct degenerate_triple_error : error {
    explicit degenerate_triple_error(const std::string& msg) : error(msg) {}
};

struct singular_matrix_error : error {
    explicit singular_matrix_error(const std::string& msg) : error(msg) {}
};

struct step_too_large_error : error {
    explicit step_too_large_error(const std::string& msg) : error(msg) {}
};

struct io_error : error {
    explicit io_error(const std::string& msg) : error(msg) {}
};

} // namespace densgeo

#endif
