#include "aslg/ingest.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "aslg/errors.hpp"

namespace aslg {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n' || s.back() == '"'))
        s.remove_suffix(1);
    return s;
}

std::string_view strip_bom(std::string_view s) {
    if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);
    return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    text = strip_bom(text);
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        if (!trim(line).empty()) out.push_back(line);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    while (true) {
        const std::size_t c = line.find(',');
        out.push_back(trim(line.substr(0, c)));
        if (c == std::string_view::npos) break;
        line.remove_prefix(c + 1);
    }
    return out;
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

bool is_missing(std::string_view s) {
    s = trim(s);
    return s.empty() || s == "N/A" || s == "NA" || s == "NaN" || s == "nan";
}

void sort_by_date(LevelSeries& s) {
    std::vector<std::size_t> idx(s.dates.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.dates[a] < s.dates[b]; });
    LevelSeries out;
    out.dropped = s.dropped;
    for (std::size_t i : idx) {
        if (!out.dates.empty() && out.dates.back() == s.dates[i])
            throw IoError("duplicate date " + format_iso_date(s.dates[i]));
        out.dates.push_back(s.dates[i]);
        out.levels.push_back(s.levels[i]);
    }
    s = std::move(out);
}

std::vector<std::string_view> ecb_header(const std::vector<std::string_view>& lines) {
    if (lines.empty()) throw IoError("ECB file is empty");
    std::vector<std::string_view> header = split_fields(lines.front());
    if (header.empty() || header.front() != "Date") throw IoError("malformed ECB header: first column must be 'Date'");
    while (!header.empty() && header.back().empty()) header.pop_back();
    if (header.size() < 2) throw IoError("malformed ECB header: no currency columns");
    return header;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file_atomic(const fs::path& p, std::string_view bytes) {
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("cannot write " + tmp.string());
    }
    fs::rename(tmp, p);
}

std::uint32_t le32(std::string_view s, std::size_t off) {
    if (off + 4 > s.size()) throw IoError("truncated zip archive");
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[off + static_cast<std::size_t>(i)]);
    return v;
}

std::uint16_t le16(std::string_view s, std::size_t off) {
    if (off + 2 > s.size()) throw IoError("truncated zip archive");
    return static_cast<std::uint16_t>(static_cast<unsigned char>(s[off]) |
                                      (static_cast<unsigned char>(s[off + 1]) << 8));
}

void validate_csv_body(std::string_view body, const std::string& source) {
    const std::string_view b = trim(strip_bom(body));
    if (b.empty()) throw IoError("malformed body from " + source + ": empty");
    if (b.substr(0, 4) != "Date") throw IoError("malformed body from " + source + ": header does not start with 'Date'");
}

bool is_url(const std::string& s) { return s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0; }

std::string store_in_cache(const fs::path& dir, std::string_view body) {
    const std::string hash = sha256_hex(body);
    const fs::path target = dir / (hash + ".csv");
    if (!fs::exists(target)) write_file_atomic(target, body);
    return hash;
}

}  // namespace

std::vector<std::string> ecb_currency_codes(std::string_view csv) {
    const auto header = ecb_header(split_lines(csv));
    return {header.begin() + 1, header.end()};
}

LevelSeries parse_ecb_hist(std::string_view csv, const std::string& currency_code) {
    const auto lines = split_lines(csv);
    const auto header = ecb_header(lines);
    const auto it = std::find(header.begin() + 1, header.end(), currency_code);
    if (it == header.end()) {
        std::string codes;
        for (auto h = header.begin() + 1; h != header.end(); ++h) codes += (codes.empty() ? "" : ", ") + std::string(*h);
        throw IoError("unknown currency '" + currency_code + "'; available: " + codes);
    }
    const auto col = static_cast<std::size_t>(it - header.begin());
    LevelSeries out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i]);
        const auto date = parse_iso_date(fields.front());
        if (!date) throw IoError("line " + std::to_string(i + 1) + ": bad date '" + std::string(fields.front()) + "'");
        if (col >= fields.size() || is_missing(fields[col])) {
            ++out.dropped;
            continue;
        }
        const auto v = parse_number(fields[col]);
        if (!v) throw IoError("line " + std::to_string(i + 1) + ": bad value '" + std::string(fields[col]) + "'");
        out.dates.push_back(*date);
        out.levels.push_back(*v);
    }
    sort_by_date(out);
    return out;
}

LevelSeries parse_generic_csv(std::string_view csv) {
    const auto lines = split_lines(csv);
    LevelSeries out;
    bool dated = false;
    bool first_data = true;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto fields = split_fields(lines[i]);
        while (fields.size() > 1 && fields.back().empty()) fields.pop_back();
        const std::string where = "line " + std::to_string(i + 1);
        if (fields.size() > 2) throw IoError(where + ": expected one or two columns");
        const std::string_view vfield = fields.back();
        if (first_data) {
            const bool numeric = parse_number(vfield).has_value() || (fields.size() == 2 && is_missing(vfield) &&
                                                                      parse_iso_date(fields.front()).has_value());
            if (!numeric && i == 0) continue;  // header
            dated = fields.size() == 2;
            first_data = false;
        }
        if ((fields.size() == 2) != dated) throw IoError(where + ": inconsistent column count");
        if (is_missing(vfield)) {
            ++out.dropped;
            continue;
        }
        const auto v = parse_number(vfield);
        if (!v) throw IoError(where + ": bad value '" + std::string(vfield) + "'");
        if (dated) {
            const auto d = parse_iso_date(fields.front());
            if (!d) throw IoError(where + ": bad date '" + std::string(fields.front()) + "'");
            out.dates.push_back(*d);
        }
        out.levels.push_back(*v);
    }
    if (out.levels.empty()) throw IoError("no numeric values found");
    if (dated) sort_by_date(out);
    return out;
}

ReturnSeries levels_to_returns(std::span<const double> levels) {
    if (levels.size() < 2) throw InvalidArgument("at least two levels are required");
    std::vector<double> r(levels.size() - 1);
    for (std::size_t t = 0; t < levels.size(); ++t) {
        if (!(levels[t] > 0.0) || !std::isfinite(levels[t]))
            throw InvalidArgument("nonpositive level at index " + std::to_string(t));
        if (t > 0) r[t - 1] = 100.0 * (std::log(levels[t]) - std::log(levels[t - 1]));
    }
    return ReturnSeries(std::move(r));
}

ReturnSeries levels_to_returns(const LevelSeries& levels) {
    ReturnSeries r = levels_to_returns(std::span<const double>(levels.levels));
    if (levels.dates.empty()) return r;
    std::vector<Date> d(levels.dates.begin() + 1, levels.dates.end());
    std::vector<double> v(r.values().begin(), r.values().end());
    return ReturnSeries(std::move(v), std::move(d));
}

fs::path default_cache_dir() {
    if (const char* e = std::getenv("ASLG_CACHE_DIR"); e && *e) return e;
    if (const char* e = std::getenv("XDG_CACHE_HOME"); e && *e) return fs::path(e) / "aslgarch";
    if (const char* e = std::getenv("HOME"); e && *e) return fs::path(e) / ".cache" / "aslgarch";
    return ".aslgarch-cache";
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

std::string unzip_first(std::string_view archive) {
    // End of central directory: last occurrence of its signature.
    if (archive.size() < 22) throw IoError("truncated zip archive");
    std::size_t eocd = std::string_view::npos;
    for (std::size_t i = archive.size() - 22 + 1; i-- > 0;) {
        if (le32(archive, i) == 0x06054b50) {
            eocd = i;
            break;
        }
        if (archive.size() - i > 22 + 65535) break;
    }
    if (eocd == std::string_view::npos) throw IoError("zip end-of-central-directory not found");
    const std::size_t cd = le32(archive, eocd + 16);
    if (le32(archive, cd) != 0x02014b50) throw IoError("bad zip central directory");
    const std::uint16_t method = le16(archive, cd + 10);
    const std::size_t csize = le32(archive, cd + 20);
    const std::size_t usize = le32(archive, cd + 24);
    const std::size_t local = le32(archive, cd + 42);
    if (le32(archive, local) != 0x04034b50) throw IoError("bad zip local header");
    const std::size_t data = local + 30 + le16(archive, local + 26) + le16(archive, local + 28);
    if (data + csize > archive.size()) throw IoError("truncated zip entry");
    const std::string_view payload = archive.substr(data, csize);
    if (method == 0) return std::string(payload);
    if (method != 8) throw IoError("unsupported zip compression method " + std::to_string(method));

    std::string out(usize, '\0');
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw IoError("zlib initialization failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(payload.data()));
    zs.avail_in = static_cast<uInt>(payload.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    const std::size_t produced = zs.total_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != usize) throw IoError("corrupt deflate stream in zip entry");
    return out;
}

std::string fetch_ecb(const std::string& url_or_path, const FetchOptions& options) {
    const fs::path dir = options.cache_dir.value_or(default_cache_dir());
    std::error_code ec;
    fs::create_directories(dir / "urls", ec);
    if (ec) throw IoError("cannot create cache directory " + dir.string() + ": " + ec.message());

    if (!is_url(url_or_path)) {
        if (!fs::exists(url_or_path)) throw IoError("no such file: " + url_or_path);
        std::string body = read_file(url_or_path);
        if (body.rfind("PK\x03\x04", 0) == 0) body = unzip_first(body);
        validate_csv_body(body, url_or_path);
        store_in_cache(dir, body);
        return body;
    }

    const fs::path index = dir / "urls" / sha256_hex(url_or_path);
    if (!options.refresh && fs::exists(index)) {
        const std::string hash{trim(read_file(index))};
        const fs::path cached = dir / (hash + ".csv");
        if (fs::exists(cached)) {
            std::string body = read_file(cached);
            if (sha256_hex(body) == hash) return body;
        }
    }
    const HttpTransport transport = options.transport ? options.transport : default_http_transport();
    HttpResponse resp = transport(url_or_path, options.timeout);
    if (resp.status >= 400 || resp.status <= 0)
        throw IoError("HTTP status " + std::to_string(resp.status) + " fetching " + url_or_path);
    if (resp.body.rfind("PK\x03\x04", 0) == 0) resp.body = unzip_first(resp.body);
    validate_csv_body(resp.body, url_or_path);
    const std::string hash = store_in_cache(dir, resp.body);
    write_file_atomic(index, hash + "\n");
    return resp.body;
}

}  // namespace aslg
