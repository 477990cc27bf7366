#pragma once

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <string>

#include "entrovel/datasource.hpp"

namespace entrovel {

/// HTTP(S) GET via cpp-httplib, following redirects.
class HttpTransport final : public Transport {
public:
    explicit HttpTransport(int timeout_seconds = 30) : timeout_seconds_(timeout_seconds) {}

    std::string get(const std::string& url) override {
        const auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) throw TransportError("not a URL: " + url);
        const auto path_start = url.find('/', scheme_end + 3);
        const std::string origin = url.substr(0, path_start);
        const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

        httplib::Client client(origin);
        client.set_follow_location(true);
        client.set_connection_timeout(timeout_seconds_);
        client.set_read_timeout(timeout_seconds_);
        auto res = client.Get(path);
        if (!res) throw TransportError("GET " + url + " failed: " + httplib::to_string(res.error()));
        if (res->status < 200 || res->status >= 300)
            throw TransportError("GET " + url + " returned HTTP " + std::to_string(res->status));
        return res->body;
    }

private:
    int timeout_seconds_;
};

}  // namespace entrovel
