#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

// Little-endian byte packing shared by the graph and model artifact formats.
namespace tepgnn::io {

static_assert(std::endian::native == std::endian::little, "little-endian host required");

class ByteWriter {
 public:
  template <typename T>
    requires std::is_arithmetic_v<T>
  void put(T v) {
    char raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    buf_.append(raw, sizeof(T));
  }
  void put_string(std::string_view s) {
    put(static_cast<std::uint32_t>(s.size()));
    buf_.append(s);
  }
  void put_raw(std::string_view s) { buf_.append(s); }
  const std::string& bytes() const { return buf_; }
  std::string take() { return std::move(buf_); }

 private:
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
    requires std::is_arithmetic_v<T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + off_, sizeof(T));
    off_ += sizeof(T);
    return v;
  }
  std::string get_string() {
    auto len = get<std::uint32_t>();
    return std::string(get_raw(len));
  }
  std::string_view get_raw(std::size_t n) {
    need(n);
    std::string_view v = bytes_.substr(off_, n);
    off_ += n;
    return v;
  }
  std::size_t offset() const { return off_; }
  bool done() const { return off_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - off_ < n) {
      throw std::runtime_error("truncated data at byte " + std::to_string(off_));
    }
  }
  std::string_view bytes_;
  std::size_t off_ = 0;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace tepgnn::io
