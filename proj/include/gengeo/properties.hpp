#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gengeo {

// One module invariant, runnable in isolation. Returns nullopt on success
// and a short failure description otherwise (throwing also counts as
// failure for the runners).
struct PropertyCheck {
    std::string module;
    std::string name;
    std::function<std::optional<std::string>()> run;
};

// Every documented module invariant, in a deterministic order.
const std::vector<PropertyCheck>& module_property_checks();

} // namespace gengeo
