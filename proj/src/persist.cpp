#include "hhlab/persist.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "hhlab/error.hpp"

namespace hhlab {

namespace {

void put_u32(std::vector<unsigned char>& b, std::uint32_t v)
{
    for (int k = 0; k < 4; ++k) b.push_back((unsigned char)((v >> (8 * k)) & 0xff));
}

void put_f64(std::vector<unsigned char>& b, double d)
{
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int k = 0; k < 8; ++k) b.push_back((unsigned char)((v >> (8 * k)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p)
{
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= std::uint32_t(p[k]) << (8 * k);
    return v;
}

double get_f64(const unsigned char* p)
{
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= std::uint64_t(p[k]) << (8 * k);
    return std::bit_cast<double>(v);
}

FileHeader parse_header(const unsigned char* p, std::size_t n, const std::string& path)
{
    if (n < sizeof(kMagic) || std::memcmp(p, kMagic, sizeof(kMagic)) != 0)
        throw FormatError(path + ": not an HHLAB1 file (bad magic or version)");
    if (n < kHeaderBytes) throw CorruptionError(path + ": truncated header");
    FileHeader h;
    p += sizeof(kMagic);
    h.nx = get_u32(p);
    h.ny = get_u32(p + 4);
    h.rank = get_u32(p + 8);
    h.alpha = get_f64(p + 12);
    h.epsilon = get_f64(p + 20);
    h.cutoff_scale = get_f64(p + 28);
    h.normal_sign = p[36];
    if (h.normal_sign != 1) throw FormatError(path + ": unsupported normal-sign convention");
    return h;
}

std::vector<unsigned char> read_all(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ArgumentError("cannot open " + path);
    return std::vector<unsigned char>(std::istreambuf_iterator<char>(f), {});
}

} // namespace

std::string FileHeader::describe() const
{
    std::ostringstream s;
    s.precision(17);
    s << "format HHLAB1\nnx " << nx << "\nny " << ny << "\nrank " << rank << "\nalpha " << alpha << "\nepsilon "
      << epsilon << "\ncutoff_scale " << cutoff_scale << "\nnormal inward\n";
    return s.str();
}

void persist_configuration(const Configuration& c, const std::string& path)
{
    c.validate();
    const CylinderGrid& g = c.grid;
    std::vector<unsigned char> b(kMagic, kMagic + sizeof(kMagic));
    put_u32(b, std::uint32_t(g.nx));
    put_u32(b, std::uint32_t(g.ny));
    put_u32(b, std::uint32_t(g.rank));
    put_f64(b, c.alpha);
    put_f64(b, g.epsilon);
    put_f64(b, g.cutoff_scale);
    b.push_back(1);
    for (const FieldGrid* f : {&c.A.ax, &c.A.ay, &c.phi, &c.psi})
        for (const cplx v : f->data()) {
            put_f64(b, v.real());
            put_f64(b, v.imag());
        }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ArgumentError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(b.data()), std::streamsize(b.size()));
    if (!out) throw ArgumentError("write failed for " + path);
}

FileHeader inspect_configuration(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ArgumentError("cannot open " + path);
    unsigned char buf[kHeaderBytes];
    f.read(reinterpret_cast<char*>(buf), sizeof(buf));
    return parse_header(buf, std::size_t(f.gcount()), path);
}

Configuration load_configuration(const std::string& path, std::optional<int> expected_rank)
{
    const std::vector<unsigned char> b = read_all(path);
    const FileHeader h = parse_header(b.data(), b.size(), path);
    if (expected_rank && int(h.rank) != *expected_rank)
        throw FormatError(path + ": file has rank " + std::to_string(h.rank) + " but rank " +
                          std::to_string(*expected_rank) + " is required");
    CylinderGrid g;
    g.nx = int(h.nx);
    g.ny = int(h.ny);
    g.rank = int(h.rank);
    g.epsilon = h.epsilon;
    g.cutoff_scale = h.cutoff_scale;
    try {
        g.validate();
    } catch (const ValidationError& e) {
        throw FormatError(path + ": header describes an invalid grid: " + e.what());
    }
    const std::size_t per = std::size_t(g.points()) * std::size_t(g.entries());
    const std::size_t need = kHeaderBytes + 4 * per * 16;
    if (b.size() < need) throw CorruptionError(path + ": truncated field data");
    if (b.size() > need) throw CorruptionError(path + ": trailing bytes after field data");

    Configuration c = Configuration::zero(g, h.alpha);
    const unsigned char* p = b.data() + kHeaderBytes;
    for (FieldGrid* f : {&c.A.ax, &c.A.ay, &c.phi, &c.psi})
        for (cplx& v : f->data()) {
            v = cplx(get_f64(p), get_f64(p + 8));
            p += 16;
        }
    return c;
}

} // namespace hhlab
