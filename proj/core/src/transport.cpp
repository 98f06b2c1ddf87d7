#include "voiptap/transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "voiptap/error.hpp"
#include "voiptap/hex.hpp"

namespace voiptap {
namespace {

using clock = std::chrono::steady_clock;

std::string errno_text() { return std::strerror(errno); }

bool send_all(int fd, const char* data, std::size_t n) {
    while (n > 0) {
        const ssize_t w = ::send(fd, data, n, MSG_NOSIGNAL);
        if (w < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        data += w;
        n -= static_cast<std::size_t>(w);
    }
    return true;
}

int connect_with_timeout(const std::string& host, std::uint16_t port,
                         std::chrono::milliseconds timeout) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const std::string service = std::to_string(port);
    if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
        throw ConnectError("cannot resolve " + host + ": " + ::gai_strerror(rc));
    }

    std::string last_error = "no address";
    for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
        const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            last_error = errno_text();
            continue;
        }
        const int flags = ::fcntl(fd, F_GETFL, 0);
        ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
        int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
        if (rc < 0 && errno == EINPROGRESS) {
            pollfd p{fd, POLLOUT, 0};
            rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
            if (rc == 0) {
                last_error = "timed out";
                ::close(fd);
                continue;
            }
            int so_error = 0;
            socklen_t len = sizeof(so_error);
            ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &so_error, &len);
            if (so_error != 0) {
                last_error = std::strerror(so_error);
                ::close(fd);
                continue;
            }
            rc = 0;
        }
        if (rc < 0) {
            last_error = errno_text();
            ::close(fd);
            continue;
        }
        ::fcntl(fd, F_SETFL, flags);
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        ::freeaddrinfo(res);
        return fd;
    }
    ::freeaddrinfo(res);
    throw ConnectError("cannot connect to " + host + ":" + service + ": " + last_error);
}

class FdGuard {
public:
    explicit FdGuard(int fd) : fd_(fd) {}
    ~FdGuard() {
        if (fd_ >= 0) ::close(fd_);
    }
    FdGuard(const FdGuard&) = delete;
    FdGuard& operator=(const FdGuard&) = delete;
    int get() const { return fd_; }

private:
    int fd_;
};

}  // namespace

WireMode parse_wire_mode(std::string_view s) {
    if (s == "raw") return WireMode::raw;
    if (s == "hex") return WireMode::hex;
    throw ConfigError("unknown wire mode '" + std::string(s) + "' (expected raw or hex)");
}

std::string_view to_string(WireMode m) { return m == WireMode::raw ? "raw" : "hex"; }

void TransportConfig::validate(bool allow_ephemeral) const {
    if (port == 0 && !allow_ephemeral) {
        throw ConfigError("port must be within 1..65535");
    }
    if (packet_min == 0 || packet_min > packet_max) {
        throw ConfigError("packet sizes must satisfy 0 < packet_min <= packet_max");
    }
    if (send_interval.count() <= 0 || accept_poll.count() <= 0) {
        throw ConfigError("send and accept intervals must be positive");
    }
}

std::string Frame::wire_bytes(WireMode mode) const {
    if (mode == WireMode::hex) {
        return hex_encode(payload);
    }
    return std::string(payload.begin(), payload.end());
}

std::vector<Frame> packetize(RingBuffer& buf, const TransportConfig& cfg) {
    std::vector<Frame> frames;
    std::size_t count = 0;
    const std::size_t stored = buf.size();
    while (count < stored) {
        const std::size_t available = buf.size();
        if (available < cfg.packet_min) {
            break;
        }
        const std::size_t n = std::min(available, cfg.packet_max);
        Frame f;
        f.payload.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            f.payload.push_back(buf.get_legacy());
        }
        count += n;
        frames.push_back(std::move(f));
    }
    return frames;
}

AudioServer::AudioServer(TransportConfig cfg, RingBuffer& buf) : cfg_(cfg), buf_(buf) {
    cfg_.validate(/*allow_ephemeral=*/true);
}

AudioServer::~AudioServer() { stop(); }

void AudioServer::start() {
    if (running_) {
        return;
    }
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) {
        throw StartupError("socket: " + errno_text());
    }
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(cfg_.port);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 ||
        ::listen(listen_fd_, 4) < 0) {
        const std::string err = errno_text();
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw StartupError("cannot bind port " + std::to_string(cfg_.port) + ": " + err);
    }
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    bound_port_ = ntohs(addr.sin_port);

    running_ = true;
    acceptor_ = std::thread([this] { accept_loop(); });
    sender_ = std::thread([this] { send_loop(); });
}

void AudioServer::stop() {
    if (!running_.exchange(false)) {
        return;
    }
    if (acceptor_.joinable()) acceptor_.join();
    if (sender_.joinable()) sender_.join();
    {
        std::lock_guard lock(client_mu_);
        if (client_fd_ >= 0) {
            ::close(client_fd_);
            client_fd_ = -1;
        }
    }
    ::close(listen_fd_);
    listen_fd_ = -1;
}

bool AudioServer::has_client() const {
    std::lock_guard lock(client_mu_);
    return client_fd_ >= 0;
}

ServerStats AudioServer::stats() const {
    std::lock_guard lock(client_mu_);
    return stats_;
}

void AudioServer::drop_client_locked() {
    if (client_fd_ >= 0) {
        ::shutdown(client_fd_, SHUT_RDWR);
        ::close(client_fd_);
        client_fd_ = -1;
        ++stats_.clients_dropped;
    }
}

void AudioServer::accept_loop() {
    while (running_) {
        pollfd p{listen_fd_, POLLIN, 0};
        const int rc = ::poll(&p, 1, static_cast<int>(cfg_.accept_poll.count()));
        if (rc <= 0 || !(p.revents & POLLIN)) {
            continue;
        }
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            continue;
        }
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        // A stalled reader must not wedge the sender forever.
        timeval tv{2, 0};
        ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));

        std::lock_guard lock(client_mu_);
        drop_client_locked();
        client_fd_ = fd;
        ++stats_.clients_accepted;
    }
}

void AudioServer::send_loop() {
    auto next = clock::now() + cfg_.send_interval;
    while (running_) {
        std::this_thread::sleep_until(next);
        next += cfg_.send_interval;
        if (clock::now() > next) {
            next = clock::now() + cfg_.send_interval;
        }

        std::lock_guard lock(client_mu_);
        if (client_fd_ < 0) {
            continue;
        }
        for (const auto& frame : packetize(buf_, cfg_)) {
            const std::string wire = frame.wire_bytes(cfg_.wire_mode);
            if (!send_all(client_fd_, wire.data(), wire.size())) {
                drop_client_locked();
                break;
            }
            ++stats_.frames_sent;
            stats_.octets_sent += frame.payload.size();
        }
    }
}

RecordResult record(const RecordOptions& opts) {
    if (opts.port == 0) {
        throw ConfigError("port must be within 1..65535");
    }
    if (!(opts.duration_s > 0.0)) {
        throw DomainError("recording duration must be positive");
    }
    opts.wav.validate();
    if (opts.wav.bits_per_sample != 8) {
        throw ConfigError("the audio stream carries 8-bit samples");
    }

    FdGuard sock(connect_with_timeout(opts.ip, opts.port, opts.connect_timeout));

    RecordResult result;
    result.path = opts.out;
    result.artifact.params = opts.wav;
    std::vector<std::uint8_t> samples;
    {
        WavStreamWriter writer(opts.out, opts.wav);
        HexStreamDecoder hex;
        std::vector<char> chunk(8192);
        std::vector<std::uint8_t> decoded;
        const auto deadline = clock::now() + std::chrono::duration_cast<clock::duration>(
                                                 std::chrono::duration<double>(opts.duration_s));
        for (;;) {
            const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now());
            if (left.count() <= 0) {
                break;
            }
            pollfd p{sock.get(), POLLIN, 0};
            const int rc = ::poll(&p, 1, static_cast<int>(left.count()));
            if (rc < 0 && errno == EINTR) continue;
            if (rc <= 0) continue;
            const ssize_t n = ::recv(sock.get(), chunk.data(), chunk.size(), 0);
            if (n < 0 && errno == EINTR) continue;
            if (n <= 0) {
                result.partial = true;
                break;
            }
            const auto* bytes = reinterpret_cast<const std::uint8_t*>(chunk.data());
            if (opts.wire_mode == WireMode::hex) {
                decoded.clear();
                hex.feed(std::string_view(chunk.data(), static_cast<std::size_t>(n)), decoded);
                writer.append(decoded);
                samples.insert(samples.end(), decoded.begin(), decoded.end());
            } else {
                writer.append(std::span(bytes, static_cast<std::size_t>(n)));
                samples.insert(samples.end(), bytes, bytes + n);
            }
        }
        writer.finalize();
    }
    result.artifact.samples = std::move(samples);

    if (opts.archive != nullptr) {
        try {
            result.entry = opts.archive->put(opts.out, opts.archive_name);
        } catch (const Error& e) {
            result.archive_error = e.what();
        }
    }
    return result;
}

}  // namespace voiptap
