#include "viewplan/features.hpp"

#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

namespace viewplan {

namespace {

constexpr uint32_t kCacheMagic = 0x43445056;  // "VPDC"

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};

void put_u32(FILE* f, uint32_t v) {
    uint8_t b[4] = {uint8_t(v), uint8_t(v >> 8), uint8_t(v >> 16), uint8_t(v >> 24)};
    if (std::fwrite(b, 1, 4, f) != 4) throw std::runtime_error("descriptor cache: write failed");
}

uint32_t get_u32(FILE* f) {
    uint8_t b[4];
    if (std::fread(b, 1, 4, f) != 4) throw std::runtime_error("descriptor cache: truncated header");
    return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 | uint32_t(b[3]) << 24;
}

}  // namespace

void write_descriptor_cache(const std::string& path, const DescriptorSet& set) {
    std::unique_ptr<FILE, FileCloser> f(std::fopen(path.c_str(), "wb"));
    if (!f) throw std::runtime_error("descriptor cache: cannot write " + path);
    put_u32(f.get(), kCacheMagic);
    put_u32(f.get(), uint32_t(set.count));
    put_u32(f.get(), uint32_t(set.dim));
    static_assert(sizeof(float) == 4);
    // Host is little-endian on every supported target; floats go out raw.
    if (!set.data.empty() &&
        std::fwrite(set.data.data(), 4, set.data.size(), f.get()) != set.data.size()) {
        throw std::runtime_error("descriptor cache: write failed for " + path);
    }
}

std::optional<DescriptorSet> read_descriptor_cache(const std::string& path) {
    std::unique_ptr<FILE, FileCloser> f(std::fopen(path.c_str(), "rb"));
    if (!f) return std::nullopt;
    if (get_u32(f.get()) != kCacheMagic) {
        throw std::runtime_error("descriptor cache: bad magic in " + path);
    }
    DescriptorSet set;
    set.count = int(get_u32(f.get()));
    set.dim = int(get_u32(f.get()));
    if (set.count < 0 || set.dim < 1) {
        throw std::runtime_error("descriptor cache: bad header in " + path);
    }
    set.data.resize(size_t(set.count) * set.dim);
    if (!set.data.empty() &&
        std::fread(set.data.data(), 4, set.data.size(), f.get()) != set.data.size()) {
        throw std::runtime_error("descriptor cache: truncated data in " + path);
    }
    return set;
}

}  // namespace viewplan
