#include "perclab/io.hpp"

#include <array>
#include <charconv>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace perclab {

namespace {

constexpr char kMagic[8] = {'P', 'L', 'C', 'F', 'G', '0', '0', '1'};

template <typename T>
void put_raw(std::ostream& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
T get_raw(std::istream& in) {
  static_assert(std::is_trivially_copyable_v<T>);
  char buf[sizeof(T)];
  in.read(buf, sizeof(T));
  if (!in) throw std::runtime_error("truncated configuration stream");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

long long parse_int(const std::string& s, std::size_t& pos, char stop) {
  const std::size_t end = s.find(stop, pos);
  const std::size_t limit = end == std::string::npos ? s.size() : end;
  long long value = 0;
  const auto res = std::from_chars(s.data() + pos, s.data() + limit, value);
  if (res.ec != std::errc() || res.ptr != s.data() + limit) throw std::runtime_error("malformed facet line");
  pos = end == std::string::npos ? s.size() : end + 1;
  return value;
}

}  // namespace

std::string facet_to_line(const FacetKey& f) {
  std::ostringstream out;
  for (int i = 0; i < f.d; ++i) {
    if (i) out << ',';
    // Primal corners are even in doubled coordinates; print them plain.
    out << (f.lattice == Lattice::kPrimal ? f.base2[i] / 2 : f.base2[i]);
  }
  out << ';' << static_cast<unsigned>(f.axes) << ';' << (f.lattice == Lattice::kPrimal ? "primal" : "dual");
  return out.str();
}

FacetKey facet_from_line(const std::string& line) {
  std::vector<std::int32_t> coords;
  std::size_t pos = 0;
  const std::size_t first_semi = line.find(';');
  if (first_semi == std::string::npos) throw std::runtime_error("malformed facet line");
  while (pos < first_semi) {
    const std::size_t comma = line.find(',', pos);
    const std::size_t stop = comma == std::string::npos || comma > first_semi ? first_semi : comma;
    long long v = 0;
    const auto res = std::from_chars(line.data() + pos, line.data() + stop, v);
    if (res.ec != std::errc() || res.ptr != line.data() + stop) throw std::runtime_error("malformed facet line");
    coords.push_back(static_cast<std::int32_t>(v));
    pos = stop + 1;
  }
  std::size_t rest = first_semi + 1;
  const long long axes = parse_int(line, rest, ';');
  const std::string tag = line.substr(rest);
  Lattice lattice;
  if (tag == "primal")
    lattice = Lattice::kPrimal;
  else if (tag == "dual")
    lattice = Lattice::kDual;
  else
    throw std::runtime_error("malformed facet line: unknown lattice tag");
  const int d = static_cast<int>(coords.size());
  Vertex corner;
  corner.d = static_cast<std::int8_t>(d);
  for (int i = 0; i < d; ++i) {
    if (lattice == Lattice::kDual && coords[i] % 2 == 0)
      throw std::runtime_error("malformed facet line: dual coordinates must be odd");
    corner.x[i] = lattice == Lattice::kPrimal ? coords[i] : (coords[i] - 1) / 2;
  }
  return facet_at(corner, static_cast<std::uint8_t>(axes), lattice);
}

void write_facet_lines(std::ostream& out, const std::vector<FacetKey>& facets) {
  for (const auto& f : facets) out << facet_to_line(f) << '\n';
}

std::vector<FacetKey> read_facet_lines(std::istream& in) {
  std::vector<FacetKey> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(facet_from_line(line));
  }
  return out;
}

void write_vertex_lines(std::ostream& out, const VertexSet& set) {
  std::vector<FacetKey> facets;
  facets.reserve(set.items.size());
  for (const auto& v : set.items) facets.push_back(vertex_facet(v));
  write_facet_lines(out, facets);
}

VertexSet read_vertex_lines(std::istream& in) {
  std::vector<Vertex> vertices;
  for (const auto& f : read_facet_lines(in)) {
    if (f.axes != 0 || f.lattice != Lattice::kPrimal) throw std::runtime_error("expected vertex lines");
    Coords x{};
    for (int i = 0; i < f.d; ++i) x[i] = f.base2[i] / 2;
    vertices.push_back(Vertex{x, f.d});
  }
  return VertexSet::of(std::move(vertices));
}

void save_configuration(std::ostream& out, const Configuration& c) {
  out.write(kMagic, sizeof(kMagic));
  put_raw<std::int32_t>(out, c.params().d);
  put_raw<std::int32_t>(out, c.box().n);
  put_raw<std::int32_t>(out, c.params().S);
  put_raw<std::int32_t>(out, c.params().F);
  put_raw<double>(out, c.params().p);
  put_raw<std::uint64_t>(out, c.seed());
  put_raw<std::uint64_t>(out, c.rng_id());
  put_raw<std::uint64_t>(out, c.edge_count());
  const std::uint64_t nbytes = (c.edge_count() + 7) / 8;
  const auto& words = c.words();
  for (std::uint64_t i = 0; i < nbytes; ++i) {
    const std::uint64_t w = words[i >> 3];
    const char byte = static_cast<char>((w >> ((i & 7) * 8)) & 0xFF);
    out.write(&byte, 1);
  }
}

Configuration load_configuration(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw std::runtime_error("not a configuration stream");
  ModelParams params;
  params.d = get_raw<std::int32_t>(in);
  const int n = get_raw<std::int32_t>(in);
  params.S = get_raw<std::int32_t>(in);
  params.F = get_raw<std::int32_t>(in);
  params.p = get_raw<double>(in);
  const std::uint64_t seed = get_raw<std::uint64_t>(in);
  const std::uint64_t rng_id = get_raw<std::uint64_t>(in);
  const std::uint64_t edge_count = get_raw<std::uint64_t>(in);
  const std::uint64_t nbytes = (edge_count + 7) / 8;
  std::vector<std::uint8_t> open(edge_count, 0);
  for (std::uint64_t i = 0; i < nbytes; ++i) {
    char byte;
    in.read(&byte, 1);
    if (!in) throw std::runtime_error("truncated configuration stream");
    const auto bits = static_cast<unsigned char>(byte);
    for (int b = 0; b < 8; ++b) {
      const std::uint64_t e = i * 8 + static_cast<std::uint64_t>(b);
      if (e < edge_count) open[e] = (bits >> b) & 1u;
    }
  }
  return Configuration::from_bits(params, Box{n, params.d}, open, seed, rng_id);
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), res.ptr);
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\r\n") != std::string::npos) {
      out << '"';
      for (const char ch : f) {
        if (ch == '"') out << "\"\"";
        else out << ch;
      }
      out << '"';
    } else {
      out << f;
    }
  }
  out << "\r\n";
}

}  // namespace perclab
