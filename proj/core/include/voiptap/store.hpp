#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace voiptap {

enum class BackendKind { local_directory, generic_http };

// One archived recording. Display names may repeat; ids never do.
struct RecordingEntry {
    std::string display_name;
    std::string unique_id;
    std::chrono::system_clock::time_point uploaded_at;
    std::uint64_t size_octets = 0;
    BackendKind backend = BackendKind::local_directory;
};

// Append-only archive. Implementations must be safe to call from multiple
// threads.
class StoreBackend {
public:
    virtual ~StoreBackend() = default;

    // Archives a copy of `file`; the original is never touched.
    virtual RecordingEntry put(const std::filesystem::path& file, const std::string& name) = 0;
    // Newest first.
    virtual std::vector<RecordingEntry> list() = 0;
    // Throws NotFoundError for an unknown id.
    virtual std::vector<std::uint8_t> fetch(const std::string& id) = 0;
};

// A directory holding `index.jsonl` (one {"id","name","timestamp","size"}
// record per line, timestamp in microseconds since the Unix epoch) and an
// `objects/` subdirectory with one file per id.
class LocalDirectoryStore final : public StoreBackend {
public:
    explicit LocalDirectoryStore(std::filesystem::path root);

    RecordingEntry put(const std::filesystem::path& file, const std::string& name) override;
    std::vector<RecordingEntry> list() override;
    std::vector<std::uint8_t> fetch(const std::string& id) override;

    const std::filesystem::path& root() const noexcept { return root_; }

private:
    std::filesystem::path root_;
    std::mutex mu_;
};

// Generic HTTP archive:
//   POST {base}/recordings?name=<name>   body = file, Content-Type audio/wav
//        -> 200/201 {"id","name","timestamp","size"}
//   GET  {base}/recordings               -> JSON array of the same records
//   GET  {base}/recordings/{id}          -> raw content, 404 if unknown
// Every request carries "Authorization: Bearer <token>" when a token is set.
class HttpStore final : public StoreBackend {
public:
    HttpStore(std::string base_url, std::string bearer_token);

    // Reads STORE_URL and STORE_TOKEN; returns null when STORE_URL is unset.
    static std::unique_ptr<HttpStore> from_environment();

    RecordingEntry put(const std::filesystem::path& file, const std::string& name) override;
    std::vector<RecordingEntry> list() override;
    std::vector<std::uint8_t> fetch(const std::string& id) override;

private:
    std::string origin_;  // scheme://host[:port]
    std::string prefix_;  // path prefix without trailing slash
    std::string token_;
};

std::string generate_unique_id(std::chrono::system_clock::time_point when);

}  // namespace voiptap
