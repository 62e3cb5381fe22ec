#pragma once

// ECB reference-rate files, generic CSV input, returns, and a cached fetcher.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aslg/core.hpp"

namespace aslg {

/// Price levels ordered by ascending date (dates may be empty for undated input).
struct LevelSeries {
    std::vector<Date> dates;
    std::vector<double> levels;
    /// Rows dropped because the value was missing ("N/A" or empty).
    std::size_t dropped = 0;
};

/// Column `currency_code` of an eurofxref-hist CSV, reordered oldest-first.
[[nodiscard]] LevelSeries parse_ecb_hist(std::string_view csv, const std::string& currency_code);

/// Currency codes in the header of an eurofxref-hist CSV.
[[nodiscard]] std::vector<std::string> ecb_currency_codes(std::string_view csv);

/// Two-column "date,value" or single-column values; an optional non-numeric header row is skipped.
/// Dated input is sorted by date; undated input keeps file order.
[[nodiscard]] LevelSeries parse_generic_csv(std::string_view csv);

/// r_t = 100 (log P_t - log P_{t-1}); dates (if any) are those of P_t.
[[nodiscard]] ReturnSeries levels_to_returns(const LevelSeries& levels);
[[nodiscard]] ReturnSeries levels_to_returns(std::span<const double> levels);

struct HttpResponse {
    int status = 0;
    std::string body;
};

using HttpTransport = std::function<HttpResponse(const std::string& url, std::chrono::seconds timeout)>;

inline constexpr const char* kEcbHistUrl = "https://www.ecb.europa.eu/stats/eurofxref/eurofxref-hist.zip";

struct FetchOptions {
    /// Defaults to default_cache_dir().
    std::optional<std::filesystem::path> cache_dir;
    std::chrono::seconds timeout{30};
    /// Defaults to an HTTP(S) client.
    HttpTransport transport;
    /// Ignore cached copies of a URL and refetch.
    bool refresh = false;
};

/// $ASLG_CACHE_DIR, else $XDG_CACHE_HOME/aslgarch, else ~/.cache/aslgarch, else ./.aslgarch-cache.
[[nodiscard]] std::filesystem::path default_cache_dir();

/// HTTP(S) transport backed by cpp-httplib with redirects followed.
[[nodiscard]] HttpTransport default_http_transport();

/// Reads a local path or downloads an http(s) URL, unpacks a zip archive, checks the body is a
/// nonempty CSV whose header starts with "Date", and stores it in the cache under its SHA-256.
/// A URL seen before is served from the cache without calling the transport.
[[nodiscard]] std::string fetch_ecb(const std::string& url_or_path, const FetchOptions& options = {});

[[nodiscard]] std::string sha256_hex(std::string_view bytes);

/// Contents of the first file in a zip archive (stored or deflated).
[[nodiscard]] std::string unzip_first(std::string_view archive);

}  // namespace aslg
