#include "caif/util/url.hpp"

#include <stdexcept>
#include <string_view>

namespace caif {

HttpEndpoint parse_http_url(const std::string& url) {
    constexpr std::string_view kScheme = "http://";
    if (!std::string_view(url).starts_with(kScheme)) {
        throw std::invalid_argument("only http:// endpoints are supported: " + url);
    }
    std::string rest = url.substr(kScheme.size());
    HttpEndpoint ep;
    const auto slash = rest.find('/');
    std::string authority = rest.substr(0, slash);
    ep.path = slash == std::string::npos ? "/" : rest.substr(slash);
    const auto colon = authority.rfind(':');
    if (colon != std::string::npos) {
        try {
            ep.port = std::stoi(authority.substr(colon + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad port in " + url);
        }
        authority.resize(colon);
    }
    if (authority.empty()) throw std::invalid_argument("missing host in " + url);
    ep.host = authority;
    return ep;
}

}  // namespace caif
