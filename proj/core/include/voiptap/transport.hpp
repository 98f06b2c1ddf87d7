#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "voiptap/ringbuf.hpp"
#include "voiptap/store.hpp"
#include "voiptap/wav.hpp"

namespace voiptap {

enum class WireMode { raw, hex };

WireMode parse_wire_mode(std::string_view s);
std::string_view to_string(WireMode m);

struct TransportConfig {
    std::uint16_t port = 1234;
    std::size_t packet_min = 1024;
    std::size_t packet_max = 2048;
    std::chrono::milliseconds send_interval{100};
    std::chrono::milliseconds accept_poll{100};
    WireMode wire_mode = WireMode::raw;

    // Port 0 is accepted only when `allow_ephemeral` is set (servers in tests
    // bind an OS-chosen port).
    void validate(bool allow_ephemeral = false) const;
};

struct Frame {
    std::vector<std::uint8_t> payload;

    // Octets as they go on the wire: the payload itself or its hex text.
    std::string wire_bytes(WireMode mode) const;
};

// Drains whole frames out of `buf` the way the firmware sender loop does:
// nothing while fewer than packet_min octets are buffered, otherwise frames of
// min(size, packet_max) until the octets taken reach the size seen on entry.
std::vector<Frame> packetize(RingBuffer& buf, const TransportConfig& cfg);

struct ServerStats {
    std::size_t clients_accepted = 0;
    std::size_t clients_dropped = 0;
    std::size_t frames_sent = 0;
    std::size_t octets_sent = 0;  // payload octets, before wire encoding
};

// TCP audio server with a single active client; a newly accepted connection
// replaces (and closes) the previous one. The sender thread is the only
// consumer of the ring buffer and only drains it while a client is attached.
class AudioServer {
public:
    AudioServer(TransportConfig cfg, RingBuffer& buf);
    ~AudioServer();

    AudioServer(const AudioServer&) = delete;
    AudioServer& operator=(const AudioServer&) = delete;

    // Binds and starts the acceptor and sender threads. Throws StartupError.
    void start();
    void stop();

    // Actual bound port (differs from the configured one when that was 0).
    std::uint16_t port() const noexcept { return bound_port_; }
    bool has_client() const;
    ServerStats stats() const;

private:
    void accept_loop();
    void send_loop();
    void drop_client_locked();

    TransportConfig cfg_;
    RingBuffer& buf_;
    int listen_fd_ = -1;
    std::uint16_t bound_port_ = 0;

    mutable std::mutex client_mu_;
    int client_fd_ = -1;
    ServerStats stats_;

    std::atomic<bool> running_{false};
    std::thread acceptor_;
    std::thread sender_;
};

struct RecordOptions {
    std::string ip = "127.0.0.1";
    std::uint16_t port = 1234;
    double duration_s = 10.0;
    std::filesystem::path out = "test.wav";
    WireMode wire_mode = WireMode::raw;
    WavParams wav;
    std::chrono::milliseconds connect_timeout{3000};

    // When set, the finished file is archived under `archive_name`.
    StoreBackend* archive = nullptr;
    std::string archive_name = "test.wav";
};

struct RecordResult {
    WavArtifact artifact;
    std::filesystem::path path;
    // The server closed the connection before the recording window ended.
    bool partial = false;
    std::optional<RecordingEntry> entry;
    std::optional<std::string> archive_error;
};

// Connects, streams decoded payload octets into a WAV file for duration_s of
// wall time, then finalizes it. Throws ConnectError before creating the file
// if the server cannot be reached.
RecordResult record(const RecordOptions& opts);

}  // namespace voiptap
