#include "voiptap/ringbuf.hpp"

#include "voiptap/error.hpp"

namespace voiptap {

RingBuffer::RingBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
        throw ConfigError("ring buffer capacity must be at least 1");
    }
    data_ = std::make_unique<std::uint8_t[]>(capacity);
}

bool RingBuffer::put(std::uint8_t v) noexcept {
    const std::size_t w = write_.load(std::memory_order_relaxed);
    const std::size_t r = read_.load(std::memory_order_acquire);
    if (w - r >= capacity_) {
        return false;
    }
    data_[w % capacity_] = v;
    write_.store(w + 1, std::memory_order_release);
    return true;
}

std::optional<std::uint8_t> RingBuffer::get() noexcept {
    const std::size_t r = read_.load(std::memory_order_relaxed);
    const std::size_t w = write_.load(std::memory_order_acquire);
    if (r == w) {
        return std::nullopt;
    }
    const std::uint8_t v = data_[r % capacity_];
    read_.store(r + 1, std::memory_order_release);
    return v;
}

void RingBuffer::clear() noexcept {
    read_.store(write_.load(std::memory_order_acquire), std::memory_order_release);
}

std::size_t RingBuffer::size() const noexcept {
    const std::size_t r = read_.load(std::memory_order_acquire);
    const std::size_t w = write_.load(std::memory_order_acquire);
    // r is loaded first, so w - r cannot underflow; a third-party reader can
    // still see a stale r, hence the clamp.
    const std::size_t n = w - r;
    return n < capacity_ ? n : capacity_;
}

}  // namespace voiptap
