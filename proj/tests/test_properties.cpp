#include <doctest.h>

#include "gengeo/properties.hpp"

using namespace gengeo;

// Every documented module invariant, run through the shared registry (the
// acceptance suite executes the same list as its criterion 11).
TEST_CASE("module property checks") {
    for (const auto& check : module_property_checks()) {
        CAPTURE(check.module);
        CAPTURE(check.name);
        std::optional<std::string> failure;
        try {
            failure = check.run();
        } catch (const std::exception& e) {
            failure = std::string("threw: ") + e.what();
        }
        if (failure) { FAIL_CHECK(check.module << "/" << check.name << ": " << *failure); }
    }
}
