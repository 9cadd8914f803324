#include "nsbf/cli/cache.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <vector>

#include "nsbf/error.hpp"

namespace nsbf::cli {

namespace {

class Writer {
 public:
  template <class T>
  void put(const T& v) {
    const char* p = reinterpret_cast<const char*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void put(const SampledFn& f) {
    put<std::uint8_t>(f.is_real());
    put<std::uint64_t>(f.size());
    for (cplx v : f.values()) put(v);
  }
  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

struct Truncated : std::runtime_error {
  Truncated() : std::runtime_error("payload truncated") {}
};

class Reader {
 public:
  Reader(std::string_view bytes, GridPtr grid) : bytes_(bytes), grid_(std::move(grid)) {}

  template <class T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw Truncated();
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  SampledFn fn() {
    const bool real = get<std::uint8_t>() != 0;
    const auto n = get<std::uint64_t>();
    if (n != grid_->size()) throw std::runtime_error("sample count does not match the grid");
    std::vector<cplx> v(n);
    for (auto& x : v) x = get<cplx>();
    return SampledFn(grid_, std::move(v), real);
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  GridPtr grid_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_cache(const std::filesystem::path& path, std::uint64_t key, const CoefficientSet& cs) {
  Writer w;
  w.put<std::int32_t>(cs.N);
  w.put(cs.h);
  for (const auto* family : {&cs.alpha, &cs.mu})
    for (const auto& f : *family) w.put(f);
  w.put(cs.alpha_m1);
  w.put(cs.mu_m1);
  w.put(cs.G1);
  w.put(cs.G2);
  for (int n = 0; n <= cs.N; ++n) {
    w.put<std::uint64_t>(cs.cut_alpha_index[n]);
    w.put<std::uint64_t>(cs.cut_mu_index[n]);
  }
  const std::string& payload = w.bytes();

  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache " + tmp.string());
    const std::uint64_t size = payload.size(), sum = fnv1a(payload);
    out.write(kCacheMagic, sizeof kCacheMagic);
    out.write(reinterpret_cast<const char*>(&kCacheVersion), sizeof kCacheVersion);
    out.write(reinterpret_cast<const char*>(&key), sizeof key);
    out.write(reinterpret_cast<const char*>(&size), sizeof size);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    out.write(reinterpret_cast<const char*>(&sum), sizeof sum);
    if (!out) throw Error("cannot write cache " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::optional<CoefficientSet> read_cache(const std::filesystem::path& path, std::uint64_t key,
                                         const GridPtr& grid, std::string* why) {
  auto reject = [why](const std::string& reason) {
    if (why) *why = reason;
    return std::nullopt;
  };
  std::ifstream in(path, std::ios::binary);
  if (!in) return reject("no cache file");
  const std::string file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  constexpr std::size_t header = sizeof kCacheMagic + sizeof(std::uint32_t) + 2 * sizeof(std::uint64_t);
  if (file.size() < header + sizeof(std::uint64_t)) return reject("file too short");
  if (std::memcmp(file.data(), kCacheMagic, sizeof kCacheMagic) != 0) return reject("bad magic");
  Reader head(std::string_view(file).substr(sizeof kCacheMagic, header - sizeof kCacheMagic), grid);
  const auto version = head.get<std::uint32_t>();
  if (version != kCacheVersion)
    return reject("version " + std::to_string(version) + ", expected " + std::to_string(kCacheVersion));
  if (head.get<std::uint64_t>() != key) return reject("key mismatch: configuration changed");
  const auto size = head.get<std::uint64_t>();
  if (file.size() != header + size + sizeof(std::uint64_t)) return reject("size mismatch");
  const std::string_view payload = std::string_view(file).substr(header, size);
  std::uint64_t sum;
  std::memcpy(&sum, file.data() + header + size, sizeof sum);
  if (sum != fnv1a(payload)) return reject("checksum mismatch");

  try {
    Reader r(payload, grid);
    CoefficientSet cs;
    cs.N = r.get<std::int32_t>();
    if (cs.N < 0 || cs.N > 1000) return reject("bad N");
    cs.h = r.get<cplx>();
    for (int n = 0; n <= cs.N; ++n) cs.alpha.push_back(r.fn());
    for (int n = 0; n <= cs.N; ++n) cs.mu.push_back(r.fn());
    cs.alpha_m1 = r.fn();
    cs.mu_m1 = r.fn();
    cs.G1 = r.fn();
    cs.G2 = r.fn();
    for (int n = 0; n <= cs.N; ++n) {
      const auto ca = r.get<std::uint64_t>(), cm = r.get<std::uint64_t>();
      if (ca >= grid->size() || cm >= grid->size()) return reject("cut index out of range");
      cs.cut_alpha_index.push_back(ca);
      cs.cut_mu_index.push_back(cm);
      cs.cut_alpha.push_back((*grid)[ca]);
      cs.cut_mu.push_back((*grid)[cm]);
    }
    if (!r.done()) return reject("trailing bytes");
    return cs;
  } catch (const std::exception& e) {
    return reject(e.what());
  }
}

}  // namespace nsbf::cli
