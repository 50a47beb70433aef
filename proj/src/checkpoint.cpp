#include "mciseq/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mciseq {

namespace {

constexpr char kMagic[4] = {'M', 'C', 'T', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(os, bits);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) {
    const std::uint64_t bits = get_u64(is);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void save_tensors(const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, const Tensor*>>& tensors) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os.write(kMagic, 4);
    put_u32(os, static_cast<std::uint32_t>(tensors.size()));
    for (const auto& [name, t] : tensors) {
        put_u32(os, static_cast<std::uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        put_u32(os, static_cast<std::uint32_t>(t->shape.size()));
        for (const std::size_t d : t->shape) put_u64(os, d);
        for (const double v : t->data) put_f64(os, v);
    }
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::pair<std::string, Tensor>> load_tensors(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint: " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not a checkpoint file: " + path.string());
    const std::uint32_t count = get_u32(is);
    std::vector<std::pair<std::string, Tensor>> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t name_len = get_u32(is);
        std::string name(name_len, '\0');
        is.read(name.data(), name_len);
        const std::uint32_t ndim = get_u32(is);
        Tensor t;
        std::size_t total = 1;
        for (std::uint32_t d = 0; d < ndim; ++d) {
            t.shape.push_back(static_cast<std::size_t>(get_u64(is)));
            total *= t.shape.back();
        }
        t.data.resize(total);
        for (std::size_t j = 0; j < total; ++j) t.data[j] = get_f64(is);
        if (!is) throw std::runtime_error("truncated checkpoint: " + path.string());
        out.emplace_back(std::move(name), std::move(t));
    }
    return out;
}

void save_param_sets(const std::filesystem::path& path,
                     const std::vector<const ParamSet*>& sets) {
    std::vector<std::pair<std::string, const Tensor*>> flat;
    for (const ParamSet* ps : sets)
        for (const auto& p : ps->items) flat.emplace_back(p->name, &p->value);
    save_tensors(path, flat);
}

void load_param_sets(const std::filesystem::path& path,
                     const std::vector<ParamSet*>& sets) {
    const auto loaded = load_tensors(path);
    for (ParamSet* ps : sets) {
        for (auto& p : ps->items) {
            bool found = false;
            for (const auto& [name, t] : loaded) {
                if (name != p->name) continue;
                if (t.shape != p->value.shape)
                    throw std::runtime_error("checkpoint shape mismatch for " + name);
                p->value = t;
                found = true;
                break;
            }
            if (!found) throw std::runtime_error("checkpoint missing tensor " + p->name);
        }
    }
}

}  // namespace mciseq
