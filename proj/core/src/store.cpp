#include "voiptap/store.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <random>
#include <sstream>

#include "voiptap/error.hpp"

namespace voiptap {
namespace {

using json = nlohmann::json;
using sys_clock = std::chrono::system_clock;

constexpr const char* kIndexFile = "index.jsonl";
constexpr const char* kObjectsDir = "objects";

std::int64_t to_micros(sys_clock::time_point t) {
    return std::chrono::duration_cast<std::chrono::microseconds>(t.time_since_epoch()).count();
}

sys_clock::time_point from_micros(std::int64_t us) {
    return sys_clock::time_point(std::chrono::duration_cast<sys_clock::duration>(std::chrono::microseconds(us)));
}

json to_json(const RecordingEntry& e) {
    return json{{"id", e.unique_id},
                {"name", e.display_name},
                {"timestamp", to_micros(e.uploaded_at)},
                {"size", e.size_octets}};
}

RecordingEntry from_json(const json& j, BackendKind backend) {
    RecordingEntry e;
    e.unique_id = j.at("id").get<std::string>();
    e.display_name = j.at("name").get<std::string>();
    e.uploaded_at = from_micros(j.at("timestamp").get<std::int64_t>());
    e.size_octets = j.at("size").get<std::uint64_t>();
    e.backend = backend;
    return e;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading", p.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Ids are used as file names, so anything outside [0-9a-zA-Z-] is rejected.
bool plausible_id(const std::string& id) {
    return !id.empty() && std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '-';
    });
}

}  // namespace

std::string generate_unique_id(sys_clock::time_point when) {
    thread_local std::mt19937_64 rng{std::random_device{}()};
    std::ostringstream os;
    os << to_micros(when) << '-' << std::hex;
    os.width(16);
    os.fill('0');
    os << rng();
    return os.str();
}

LocalDirectoryStore::LocalDirectoryStore(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_ / kObjectsDir, ec);
    if (ec) {
        throw IoError("cannot create store directory", root_.string());
    }
}

RecordingEntry LocalDirectoryStore::put(const std::filesystem::path& file, const std::string& name) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(file, ec)) {
        throw IoError("not a readable file", file.string());
    }

    std::lock_guard lock(mu_);
    RecordingEntry e;
    e.display_name = name;
    e.uploaded_at = sys_clock::now();
    e.backend = BackendKind::local_directory;
    do {
        e.unique_id = generate_unique_id(e.uploaded_at);
    } while (std::filesystem::exists(root_ / kObjectsDir / e.unique_id));

    const auto object = root_ / kObjectsDir / e.unique_id;
    std::filesystem::copy_file(file, object, ec);
    if (ec) {
        throw IoError("cannot copy into store (" + ec.message() + ")", file.string());
    }
    e.size_octets = std::filesystem::file_size(object);

    std::ofstream index(root_ / kIndexFile, std::ios::app);
    index << to_json(e).dump() << '\n';
    index.flush();
    if (!index) {
        std::filesystem::remove(object, ec);
        throw IoError("cannot append to store index", (root_ / kIndexFile).string());
    }
    return e;
}

std::vector<RecordingEntry> LocalDirectoryStore::list() {
    std::lock_guard lock(mu_);
    std::vector<RecordingEntry> out;
    std::ifstream index(root_ / kIndexFile);
    std::string line;
    while (std::getline(index, line)) {
        if (line.empty()) continue;
        out.push_back(from_json(json::parse(line), BackendKind::local_directory));
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<std::uint8_t> LocalDirectoryStore::fetch(const std::string& id) {
    const auto object = root_ / kObjectsDir / id;
    if (!plausible_id(id) || !std::filesystem::is_regular_file(object)) {
        throw NotFoundError("no recording with id '" + id + "'");
    }
    return read_file(object);
}

HttpStore::HttpStore(std::string base_url, std::string bearer_token) : token_(std::move(bearer_token)) {
    const std::string scheme = "http://";
    if (base_url.rfind(scheme, 0) != 0) {
        throw ConfigError("store URL must start with http:// (got '" + base_url + "')");
    }
    const auto slash = base_url.find('/', scheme.size());
    origin_ = base_url.substr(0, slash);
    prefix_ = slash == std::string::npos ? "" : base_url.substr(slash);
    while (!prefix_.empty() && prefix_.back() == '/') {
        prefix_.pop_back();
    }
}

std::unique_ptr<HttpStore> HttpStore::from_environment() {
    const char* url = std::getenv("STORE_URL");
    if (url == nullptr || *url == '\0') {
        return nullptr;
    }
    const char* token = std::getenv("STORE_TOKEN");
    return std::make_unique<HttpStore>(url, token ? token : "");
}

namespace {

httplib::Client make_client(const std::string& origin, const std::string& token) {
    httplib::Client cli(origin);
    cli.set_connection_timeout(5, 0);
    cli.set_read_timeout(30, 0);
    cli.set_write_timeout(30, 0);
    if (!token.empty()) {
        cli.set_bearer_token_auth(token);
    }
    return cli;
}

}  // namespace

RecordingEntry HttpStore::put(const std::filesystem::path& file, const std::string& name) {
    const auto body = read_file(file);
    auto cli = make_client(origin_, token_);
    const std::string path = prefix_ + "/recordings?name=" + httplib::detail::encode_query_param(name);
    auto res = cli.Post(path, reinterpret_cast<const char*>(body.data()), body.size(), "audio/wav");
    if (!res) {
        throw UploadError("upload to " + origin_ + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200 && res->status != 201) {
        throw UploadError("upload rejected with HTTP " + std::to_string(res->status));
    }
    try {
        return from_json(json::parse(res->body), BackendKind::generic_http);
    } catch (const json::exception& e) {
        throw UploadError(std::string("malformed upload response: ") + e.what());
    }
}

std::vector<RecordingEntry> HttpStore::list() {
    auto cli = make_client(origin_, token_);
    auto res = cli.Get(prefix_ + "/recordings");
    if (!res) {
        throw UploadError("list from " + origin_ + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw UploadError("list rejected with HTTP " + std::to_string(res->status));
    }
    std::vector<RecordingEntry> out;
    for (const auto& j : json::parse(res->body)) {
        out.push_back(from_json(j, BackendKind::generic_http));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.uploaded_at > b.uploaded_at;
    });
    return out;
}

std::vector<std::uint8_t> HttpStore::fetch(const std::string& id) {
    auto cli = make_client(origin_, token_);
    auto res = cli.Get(prefix_ + "/recordings/" + httplib::detail::encode_url(id));
    if (!res) {
        throw UploadError("fetch from " + origin_ + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status == 404) {
        throw NotFoundError("no recording with id '" + id + "'");
    }
    if (res->status != 200) {
        throw UploadError("fetch rejected with HTTP " + std::to_string(res->status));
    }
    return {res->body.begin(), res->body.end()};
}

}  // namespace voiptap
