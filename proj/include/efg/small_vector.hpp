#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <new>
#include <span>
#include <utility>

namespace efg {

// Vector with room for N elements inside the object.  Adjacency lists are
// almost always this short, so graph copies and edits rarely touch the heap.
template <typename T, std::size_t N> class SmallVector {
public:
  SmallVector() = default;
  SmallVector(const SmallVector &other) {
    reserve(other.size_);
    std::uninitialized_copy(other.begin(), other.end(), begin());
    size_ = other.size_;
  }
  SmallVector(SmallVector &&other) noexcept { steal(other); }
  SmallVector &operator=(const SmallVector &other) {
    if (this != &other) {
      clear();
      reserve(other.size_);
      std::uninitialized_copy(other.begin(), other.end(), begin());
      size_ = other.size_;
    }
    return *this;
  }
  SmallVector &operator=(SmallVector &&other) noexcept {
    if (this != &other) {
      release();
      steal(other);
    }
    return *this;
  }
  ~SmallVector() { release(); }

  T *data() { return on_heap() ? heap_ : local(); }
  const T *data() const { return on_heap() ? heap_ : local(); }
  T *begin() { return data(); }
  T *end() { return data() + size_; }
  const T *begin() const { return data(); }
  const T *end() const { return data() + size_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  T &operator[](std::size_t i) { return data()[i]; }
  const T &operator[](std::size_t i) const { return data()[i]; }
  T &back() { return data()[size_ - 1]; }

  operator std::span<const T>() const { return {data(), size_}; }

  void reserve(std::size_t n) {
    if (n <= capacity_)
      return;
    n = std::max<std::size_t>(n, 2 * capacity_);
    T *fresh = static_cast<T *>(::operator new(n * sizeof(T)));
    std::uninitialized_move(begin(), end(), fresh);
    std::destroy(begin(), end());
    if (on_heap())
      ::operator delete(heap_);
    heap_ = fresh;
    capacity_ = static_cast<std::uint32_t>(n);
  }
  void push_back(T value) {
    reserve(size_ + 1);
    ::new (static_cast<void *>(data() + size_)) T(std::move(value));
    ++size_;
  }
  void pop_back() { std::destroy_at(data() + --size_); }
  // Order-preserving.
  void erase(T *pos) {
    std::move(pos + 1, end(), pos);
    pop_back();
  }
  void clear() {
    std::destroy(begin(), end());
    size_ = 0;
  }
  // Drops the heap block, if any.
  void release() {
    clear();
    if (on_heap())
      ::operator delete(heap_);
    capacity_ = N;
  }

private:
  bool on_heap() const { return capacity_ > N; }
  T *local() { return std::launder(reinterpret_cast<T *>(buffer_)); }
  const T *local() const {
    return std::launder(reinterpret_cast<const T *>(buffer_));
  }
  void steal(SmallVector &other) {
    if (other.on_heap()) {
      heap_ = other.heap_;
      capacity_ = other.capacity_;
      size_ = other.size_;
      other.capacity_ = N;
      other.size_ = 0;
      return;
    }
    std::uninitialized_move(other.begin(), other.end(), local());
    size_ = other.size_;
    other.clear();
  }

  std::uint32_t size_ = 0;
  std::uint32_t capacity_ = N;
  union {
    alignas(T) unsigned char buffer_[N * sizeof(T)];
    T *heap_;
  };
};

} // namespace efg
