#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "ksk/kernel.hpp"

namespace ksk::kern {

namespace {

constexpr char kMagic[4] = {'K', 'S', 'K', 'D'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("grid read: truncated file");
    return v;
}

}  // namespace

void write_csv(const DensityGrid& g, const std::string& path, const std::string& header) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << header;
    for (int i = 0; i < g.d; ++i) os << "x" << i + 1 << ",";
    for (int i = 0; i < g.d; ++i) os << "v" << i + 1 << ",";
    os << "value\n";
    os.precision(17);
    std::vector<int> idx(2 * g.d, 0);
    for (std::size_t pos = 0; pos < g.values.size(); ++pos) {
        for (int a = 0; a < 2 * g.d; ++a) os << g.coord(a, idx[a]) << ",";
        os << g.values[pos] << "\n";
        for (int a = 2 * g.d - 1; a >= 0; --a) {
            if (++idx[a] < g.axes[a].n) break;
            idx[a] = 0;
        }
    }
}

void write_binary(const DensityGrid& g, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.d));
    put<double>(os, g.t);
    put<double>(os, g.alpha);
    for (const auto& ax : g.axes) {
        put<std::uint32_t>(os, static_cast<std::uint32_t>(ax.n));
        put<double>(os, ax.step);
    }
    os.write(reinterpret_cast<const char*>(g.values.data()),
             static_cast<std::streamsize>(g.values.size() * sizeof(double)));
}

DensityGrid read_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("grid read: bad magic");
    if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("grid read: bad version");
    DensityGrid g;
    g.d = static_cast<int>(get<std::uint32_t>(is));
    g.t = get<double>(is);
    g.alpha = get<double>(is);
    std::size_t total = 1;
    for (int a = 0; a < 2 * g.d; ++a) {
        GridAxis ax;
        ax.n = static_cast<int>(get<std::uint32_t>(is));
        ax.step = get<double>(is);
        g.axes.push_back(ax);
        total *= static_cast<std::size_t>(ax.n);
    }
    g.values.resize(total);
    is.read(reinterpret_cast<char*>(g.values.data()),
            static_cast<std::streamsize>(total * sizeof(double)));
    if (!is) throw std::runtime_error("grid read: truncated values");
    g.nodes = total;
    KahanSum mass;
    for (double v : g.values) mass.add(v);
    g.mass = mass.value() * g.cell_volume();
    return g;
}

}  // namespace ksk::kern
