#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>

namespace voiptap {

// Fixed-capacity octet FIFO with reject-on-full puts.
//
// One producer thread may call put() while one consumer thread calls get(),
// clear() or get_legacy(). size() may be read from either side and can be
// momentarily stale. The read and write positions are free-running counters;
// the storage index is the counter modulo capacity.
class RingBuffer {
public:
    static constexpr std::size_t kDefaultCapacity = 8192;

    explicit RingBuffer(std::size_t capacity = kDefaultCapacity);

    RingBuffer(const RingBuffer&) = delete;
    RingBuffer& operator=(const RingBuffer&) = delete;

    // Appends v if there is room. A full buffer is left untouched and the
    // sample is dropped (returns false). Producer side.
    bool put(std::uint8_t v) noexcept;

    // Removes and returns the oldest octet, or nullopt when empty. Consumer side.
    std::optional<std::uint8_t> get() noexcept;

    // Firmware-compatible accessor: an empty buffer yields 0.
    std::uint8_t get_legacy() noexcept { return get().value_or(0); }

    // Discards everything currently buffered. Consumer side.
    void clear() noexcept;

    std::size_t size() const noexcept;
    std::size_t capacity() const noexcept { return capacity_; }
    bool empty() const noexcept { return size() == 0; }

    // Storage index of the oldest element; always < capacity().
    std::size_t head() const noexcept {
        return read_.load(std::memory_order_acquire) % capacity_;
    }

private:
    std::size_t capacity_;
    std::unique_ptr<std::uint8_t[]> data_;
    std::atomic<std::size_t> write_{0};
    std::atomic<std::size_t> read_{0};
};

}  // namespace voiptap
