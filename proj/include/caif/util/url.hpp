#pragma once

#include <string>

namespace caif {

struct HttpEndpoint {
    std::string host;
    int port = 80;
    std::string path = "/";
};

// Splits http://host[:port]/path. Throws std::invalid_argument otherwise.
HttpEndpoint parse_http_url(const std::string& url);

}  // namespace caif
