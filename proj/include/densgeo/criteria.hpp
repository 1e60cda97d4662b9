#ifndef DENSGEO_CRITERIA_HPP
#define DENSGEO_CRITERIA_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace densgeo::accept {

/** One named residual with its pinned bound; pass means value <= bound. */
struct check {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct criterion_result {
    std::vector<check> checks;
    bool pass = true;

    void record(const std::string& name, double value, double bound) {
        bool ok = value <= bound;
        checks.push_back({name, value, bound, ok});
        pass = pass && ok;
    }
    /** For window/identity style checks expressed as a boolean. */
    void record_flag(const std::string& name, bool ok, double value = 0.0) {
        checks.push_back({name, value, ok ? 1.0 : 0.0, ok});
        pass = pass && ok;
    }
};

struct criterion {
    int id;
    std::string name;
    std::function<criterion_result()> run;
};

/** The full acceptance suite, ids 1..11; every tolerance is pinned here. */
const std::vector<criterion>& all_criteria();

} // namespace densgeo::accept

#endif
