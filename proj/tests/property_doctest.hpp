#pragma once

#include <doctest.h>

#include "property_checks.hpp"

namespace hypersec::testing {

inline void check_property(const PropertyResult& r) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.ok);
    CHECK(r.cases == kPropertyCases);
}

}  // namespace hypersec::testing
