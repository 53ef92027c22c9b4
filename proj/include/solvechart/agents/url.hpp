// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace solvechart::agents {

/// "http://host:8080/base/" -> {"http://host:8080", "/base"}
struct EndpointUrl {
    std::string origin;
    std::string base_path; // no trailing slash; empty for the root
};

EndpointUrl split_endpoint(std::string_view url);

} // namespace solvechart::agents
