#include "voiptap/store.hpp"

#include <gtest/gtest.h>
#include <httplib.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <thread>

#include "voiptap/error.hpp"

using namespace voiptap;
namespace fs = std::filesystem;

namespace {

class StoreFiles : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("voiptap_store_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_file(const std::string& name, const std::string& content) {
        std::ofstream out(dir_ / name, std::ios::binary);
        out << content;
        return dir_ / name;
    }

    fs::path dir_;
};

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(UniqueId, Shape) {
    const auto id = generate_unique_id(std::chrono::system_clock::now());
    EXPECT_NE(id.find('-'), std::string::npos);
    for (char c : id) EXPECT_TRUE(std::isalnum(static_cast<unsigned char>(c)) || c == '-') << id;
    EXPECT_NE(id, generate_unique_id(std::chrono::system_clock::now()));
}

TEST_F(StoreFiles, SameNameTwiceGivesDistinctIds) {
    LocalDirectoryStore store(dir_ / "archive");
    const auto f = write_file("test.wav", "abc");
    const auto a = store.put(f, "test.wav");
    const auto b = store.put(f, "test.wav");
    EXPECT_NE(a.unique_id, b.unique_id);
    EXPECT_EQ(a.display_name, b.display_name);
    EXPECT_EQ(a.size_octets, 3u);
    EXPECT_EQ(store.list().size(), 2u);
}

TEST_F(StoreFiles, FreshStoreIsEmpty) {
    LocalDirectoryStore store(dir_ / "archive");
    EXPECT_TRUE(store.list().empty());
}

TEST_F(StoreFiles, EmptyFileArchives) {
    LocalDirectoryStore store(dir_ / "archive");
    const auto e = store.put(write_file("empty.wav", ""), "empty.wav");
    EXPECT_EQ(e.size_octets, 0u);
    EXPECT_TRUE(store.fetch(e.unique_id).empty());
}

TEST_F(StoreFiles, ManyPutsAreDistinctAndNewestFirst) {
    LocalDirectoryStore store(dir_ / "archive");
    const auto f = write_file("x.wav", "payload");
    std::vector<std::string> ids;
    for (int i = 0; i < 25; ++i) ids.push_back(store.put(f, "x" + std::to_string(i)).unique_id);
    EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()).size(), ids.size());
    const auto listed = store.list();
    ASSERT_EQ(listed.size(), ids.size());
    for (std::size_t i = 0; i < listed.size(); ++i) {
        EXPECT_EQ(listed[i].unique_id, ids[ids.size() - 1 - i]);
        if (i > 0) EXPECT_GE(listed[i - 1].uploaded_at, listed[i].uploaded_at);
    }
}

TEST_F(StoreFiles, FetchRoundTripAndOriginalRetained) {
    LocalDirectoryStore store(dir_ / "archive");
    std::string content(5000, '\0');
    for (std::size_t i = 0; i < content.size(); ++i) content[i] = static_cast<char>(i * 13);
    const auto f = write_file("rec.wav", content);
    const auto e = store.put(f, "rec.wav");
    EXPECT_EQ(store.fetch(e.unique_id), bytes_of(content));
    ASSERT_TRUE(fs::exists(f));
    EXPECT_EQ(fs::file_size(f), content.size());
}

TEST_F(StoreFiles, HundredMegabyteRoundTrip) {
    LocalDirectoryStore store(dir_ / "archive");
    std::string content(100u << 20, '\0');
    for (std::size_t i = 0; i < content.size(); i += 4096) content[i] = static_cast<char>(i >> 12);
    const auto f = write_file("big.wav", content);
    const auto e = store.put(f, "big.wav");
    EXPECT_EQ(e.size_octets, content.size());
    EXPECT_TRUE(store.fetch(e.unique_id) == bytes_of(content));
}

TEST_F(StoreFiles, UnknownIdIsNotFound) {
    LocalDirectoryStore store(dir_ / "archive");
    EXPECT_THROW(store.fetch("0000-ffff"), NotFoundError);
    EXPECT_THROW(store.fetch("../index.jsonl"), NotFoundError);
    EXPECT_THROW(store.fetch(""), NotFoundError);
}

TEST_F(StoreFiles, MissingSourceIsIoError) {
    LocalDirectoryStore store(dir_ / "archive");
    EXPECT_THROW(store.put(dir_ / "nope.wav", "nope"), IoError);
}

TEST_F(StoreFiles, IndexSurvivesReopen) {
    const auto f = write_file("a.wav", "12");
    std::string id;
    {
        LocalDirectoryStore store(dir_ / "archive");
        id = store.put(f, "a.wav").unique_id;
    }
    LocalDirectoryStore again(dir_ / "archive");
    ASSERT_EQ(again.list().size(), 1u);
    EXPECT_EQ(again.list()[0].unique_id, id);
}

TEST_F(StoreFiles, ConcurrentPutsAllLand) {
    LocalDirectoryStore store(dir_ / "archive");
    const auto f = write_file("c.wav", "concurrent");
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&] {
            for (int i = 0; i < 10; ++i) store.put(f, "c.wav");
        });
    }
    for (auto& t : threads) t.join();
    const auto listed = store.list();
    EXPECT_EQ(listed.size(), 40u);
    std::set<std::string> ids;
    for (const auto& e : listed) ids.insert(e.unique_id);
    EXPECT_EQ(ids.size(), 40u);
}

// Minimal in-memory archive speaking the HTTP backend protocol.
class MockArchive {
public:
    explicit MockArchive(std::string token) : token_(std::move(token)) {
        server_.Post("/api/recordings", [this](const httplib::Request& req, httplib::Response& res) {
            if (!authorized(req, res)) return;
            std::lock_guard lock(mu_);
            const std::string id = "id" + std::to_string(next_++);
            objects_[id] = req.body;
            nlohmann::json j{{"id", id},
                             {"name", req.get_param_value("name")},
                             {"timestamp", 1700000000000000LL + next_},
                             {"size", req.body.size()}};
            order_.push_back(j);
            res.status = 201;
            res.set_content(j.dump(), "application/json");
        });
        server_.Get("/api/recordings", [this](const httplib::Request& req, httplib::Response& res) {
            if (!authorized(req, res)) return;
            std::lock_guard lock(mu_);
            nlohmann::json arr = nlohmann::json::array();
            for (auto it = order_.rbegin(); it != order_.rend(); ++it) arr.push_back(*it);
            res.set_content(arr.dump(), "application/json");
        });
        server_.Get(R"(/api/recordings/([A-Za-z0-9-]+))", [this](const httplib::Request& req, httplib::Response& res) {
            if (!authorized(req, res)) return;
            std::lock_guard lock(mu_);
            const auto it = objects_.find(req.matches[1]);
            if (it == objects_.end()) {
                res.status = 404;
                return;
            }
            res.set_content(it->second, "audio/wav");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~MockArchive() {
        server_.stop();
        thread_.join();
    }

    std::string base() const { return "http://127.0.0.1:" + std::to_string(port_) + "/api"; }

private:
    bool authorized(const httplib::Request& req, httplib::Response& res) {
        if (req.get_header_value("Authorization") == "Bearer " + token_) return true;
        res.status = 401;
        return false;
    }

    std::string token_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::mutex mu_;
    int next_ = 0;
    std::map<std::string, std::string> objects_;
    std::vector<nlohmann::json> order_;
};

TEST_F(StoreFiles, HttpBackendRoundTrip) {
    MockArchive mock("secret-token");
    HttpStore store(mock.base(), "secret-token");
    const auto f = write_file("h.wav", "hello archive");
    const auto a = store.put(f, "test.wav");
    const auto b = store.put(f, "test.wav");
    EXPECT_NE(a.unique_id, b.unique_id);
    EXPECT_EQ(a.display_name, "test.wav");
    EXPECT_EQ(a.size_octets, 13u);
    EXPECT_EQ(a.backend, BackendKind::generic_http);

    const auto listed = store.list();
    ASSERT_EQ(listed.size(), 2u);
    EXPECT_EQ(listed[0].unique_id, b.unique_id);
    EXPECT_EQ(store.fetch(a.unique_id), bytes_of("hello archive"));
    EXPECT_THROW(store.fetch("missing"), NotFoundError);
    EXPECT_TRUE(fs::exists(f));
}

TEST_F(StoreFiles, HttpBackendRejectsBadToken) {
    MockArchive mock("right");
    HttpStore store(mock.base(), "wrong");
    EXPECT_THROW(store.put(write_file("t.wav", "x"), "t.wav"), UploadError);
    EXPECT_THROW(store.list(), UploadError);
}

TEST_F(StoreFiles, HttpBackendUnreachable) {
    // Bind an ephemeral port and release it again so nothing listens there.
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    ASSERT_EQ(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr), 0);
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    const int port = ntohs(addr.sin_port);
    ::close(fd);
    HttpStore store("http://127.0.0.1:" + std::to_string(port), "");
    EXPECT_THROW(store.put(write_file("t.wav", "x"), "t.wav"), UploadError);
}

TEST(HttpStoreConfig, RequiresHttpScheme) {
    EXPECT_THROW(HttpStore("https://example.invalid", ""), ConfigError);
    EXPECT_THROW(HttpStore("ftp://example.invalid", ""), ConfigError);
    EXPECT_NO_THROW(HttpStore("http://example.invalid/base/", ""));
}

TEST(HttpStoreConfig, FromEnvironment) {
    ::unsetenv("STORE_URL");
    EXPECT_EQ(HttpStore::from_environment(), nullptr);
    ::setenv("STORE_URL", "http://127.0.0.1:9", 1);
    EXPECT_NE(HttpStore::from_environment(), nullptr);
    ::unsetenv("STORE_URL");
}
