// Eigen (via ingest.hpp) must precede httplib: resolv.h defines a _res macro that Eigen uses as a name.
#include "aslg/ingest.hpp"

#include "aslg/errors.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

namespace aslg {

HttpTransport default_http_transport() {
    return [](const std::string& url, std::chrono::seconds timeout) -> HttpResponse {
        const std::size_t scheme_end = url.find("://");
        if (scheme_end == std::string::npos) throw IoError("not a URL: " + url);
        const std::size_t path_start = url.find('/', scheme_end + 3);
        const std::string origin = url.substr(0, path_start);
        const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
        httplib::Client client(origin);
        client.set_follow_location(true);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        auto res = client.Get(path);
        if (!res) throw IoError("network failure fetching " + url + ": " + httplib::to_string(res.error()));
        return {res->status, res->body};
    };
}

}  // namespace aslg
