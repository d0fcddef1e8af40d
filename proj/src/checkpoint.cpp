#include "cbf/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace cbf {
namespace {

constexpr std::array<char, 4> kMagic{'C', 'B', 'F', '1'};

static_assert(std::endian::native == std::endian::little,
              "CBF1 I/O assumes a little-endian host");

template <class T>
void put(std::vector<char>& buf, T value) {
    const auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
    buf.insert(buf.end(), bytes.begin(), bytes.end());
}

template <class T>
T take(const std::vector<char>& buf, std::size_t& pos) {
    if (pos + sizeof(T) > buf.size()) throw CheckpointError("checkpoint truncated");
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), buf.data() + pos, sizeof(T));
    pos += sizeof(T);
    return std::bit_cast<T>(bytes);
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                      const SpectralField& state) {
    if (header.n != state.grid().n())
        throw CheckpointError("checkpoint header n does not match state grid");
    std::vector<char> buf;
    buf.reserve(4 + 4 + 5 * 8 + state.data().size() * 16);
    buf.insert(buf.end(), kMagic.begin(), kMagic.end());
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(header.n));
    put(buf, header.r);
    put(buf, header.mu);
    put(buf, header.alpha);
    put(buf, header.beta);
    put(buf, header.t);
    for (const Complex& c : state.data()) {
        put(buf, c.real());
        put(buf, c.imag());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot open checkpoint for writing: " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw CheckpointError("failed writing checkpoint: " + path.string());
}

CheckpointData read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint: " + path.string());
    std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 4 || !std::equal(kMagic.begin(), kMagic.end(), buf.begin()))
        throw CheckpointError("bad checkpoint magic in " + path.string());
    std::size_t pos = 4;
    CheckpointHeader h;
    const auto n = take<std::uint32_t>(buf, pos);
    if (n < 4 || n % 2 != 0 || n > 4096) throw CheckpointError("invalid grid size in checkpoint");
    h.n = static_cast<int>(n);
    h.r = take<double>(buf, pos);
    h.mu = take<double>(buf, pos);
    h.alpha = take<double>(buf, pos);
    h.beta = take<double>(buf, pos);
    h.t = take<double>(buf, pos);
    SpectralField state{Grid(h.n)};
    const std::size_t expected = pos + state.data().size() * 16;
    if (buf.size() != expected) throw CheckpointError("checkpoint size does not match header");
    for (Complex& c : state.data()) {
        const double re = take<double>(buf, pos);
        const double im = take<double>(buf, pos);
        c = Complex(re, im);
    }
    return {h, std::move(state)};
}

}  // namespace cbf
