#include "airway/metaimage.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace airway {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct Header {
  Index3 dims{0, 0, 0};
  Vec3 spacing{1, 1, 1};
  Vec3 origin{0, 0, 0};
  MetaElementType type = MetaElementType::Float;
  bool msb = false;
  std::string data_file;  // "LOCAL" or a path relative to the header
  std::streamoff local_payload_offset = 0;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T, int N>
void parse_numbers(const std::string& text, const std::string& key, T* out) {
  std::istringstream iss(text);
  for (int i = 0; i < N; ++i) {
    if (!(iss >> out[i]))
      throw FileError("malformed header: bad value for " + key + ": '" + text + "'");
  }
}

Header read_header(std::istream& in, const std::string& path) {
  Header h;
  bool have_dims = false, have_type = false, have_datafile = false;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FileError("malformed header line in " + path + ": '" + trim(line) + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "ObjectType") {
      if (value != "Image") throw FileError("malformed header: ObjectType must be Image");
    } else if (key == "NDims") {
      if (value != "3") throw FileError("malformed header: NDims must be 3");
    } else if (key == "DimSize") {
      int d[3];
      parse_numbers<int, 3>(value, key, d);
      h.dims = {d[0], d[1], d[2]};
      have_dims = true;
    } else if (key == "ElementSpacing") {
      double s[3];
      parse_numbers<double, 3>(value, key, s);
      h.spacing = {s[0], s[1], s[2]};
    } else if (key == "Offset" || key == "Origin" || key == "Position") {
      double o[3];
      parse_numbers<double, 3>(value, key, o);
      h.origin = {o[0], o[1], o[2]};
    } else if (key == "ElementType") {
      if (value == "MET_SHORT")
        h.type = MetaElementType::Short;
      else if (value == "MET_FLOAT")
        h.type = MetaElementType::Float;
      else if (value == "MET_UCHAR")
        h.type = MetaElementType::Uchar;
      else
        throw FileError("unsupported element type: " + value);
      have_type = true;
    } else if (key == "ElementByteOrderMSB" || key == "BinaryDataByteOrderMSB") {
      h.msb = value == "True" || value == "true" || value == "1";
    } else if (key == "ElementDataFile") {
      h.data_file = value;
      have_datafile = true;
      h.local_payload_offset = in.tellg();
      break;  // payload or end of header
    }
    // Unknown keys ignored.
  }
  if (!have_dims || !have_type || !have_datafile)
    throw FileError("malformed header in " + path + ": missing required keys");
  if (h.dims.x < 1 || h.dims.y < 1 || h.dims.z < 1)
    throw FileError("malformed header: DimSize must be positive");
  if (h.spacing.x <= 0 || h.spacing.y <= 0 || h.spacing.z <= 0)
    throw FileError("malformed header: ElementSpacing must be positive");
  return h;
}

std::size_t element_size(MetaElementType t) {
  switch (t) {
    case MetaElementType::Short: return 2;
    case MetaElementType::Uchar: return 1;
    case MetaElementType::Float: return 4;
  }
  return 4;
}

void byteswap_payload(std::vector<char>& bytes, std::size_t elem) {
  if (elem == 1) return;
  for (std::size_t i = 0; i + elem <= bytes.size(); i += elem)
    for (std::size_t a = 0, b = elem - 1; a < b; ++a, --b) std::swap(bytes[i + a], bytes[i + b]);
}

ScalarVolume decode(const Header& h, std::vector<char> bytes, const std::string& path) {
  const std::size_t n =
      static_cast<std::size_t>(h.dims.x) * h.dims.y * static_cast<std::size_t>(h.dims.z);
  const std::size_t elem = element_size(h.type);
  if (bytes.size() != n * elem)
    throw FileError("payload size mismatch in " + path + ": expected " +
                    std::to_string(n * elem) + " bytes, got " + std::to_string(bytes.size()));
  const bool host_msb = std::endian::native == std::endian::big;
  if (h.msb != host_msb) byteswap_payload(bytes, elem);

  ScalarVolume v(h.dims, h.spacing, h.origin);
  switch (h.type) {
    case MetaElementType::Short: {
      const std::int16_t* p = reinterpret_cast<const std::int16_t*>(bytes.data());
      for (std::size_t i = 0; i < n; ++i) v.values[i] = static_cast<float>(p[i]);
      break;
    }
    case MetaElementType::Uchar: {
      const std::uint8_t* p = reinterpret_cast<const std::uint8_t*>(bytes.data());
      for (std::size_t i = 0; i < n; ++i) v.values[i] = static_cast<float>(p[i]);
      break;
    }
    case MetaElementType::Float: {
      std::memcpy(v.values.data(), bytes.data(), n * sizeof(float));
      break;
    }
  }
  return v;
}

std::vector<char> read_all(std::istream& in) {
  std::vector<char> bytes;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
    bytes.insert(bytes.end(), buf, buf + in.gcount());
  return bytes;
}

}  // namespace

ScalarVolume load_volume(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("file not found: " + path);
  const Header h = read_header(in, path);

  std::vector<char> bytes;
  if (h.data_file == "LOCAL") {
    bytes = read_all(in);
  } else {
    const fs::path raw = fs::path(path).parent_path() / h.data_file;
    std::ifstream rin(raw, std::ios::binary);
    if (!rin) throw FileError("file not found: " + raw.string());
    bytes = read_all(rin);
  }
  return decode(h, std::move(bytes), path);
}

void save_volume(const ScalarVolume& v, const std::string& path, MetaElementType type) {
  v.geom.validate();
  const bool local = fs::path(path).extension() == ".mha";
  const fs::path raw_name = fs::path(path).filename().replace_extension(".raw");

  std::ostringstream header;
  header << "ObjectType = Image\n"
         << "NDims = 3\n"
         << "DimSize = " << v.geom.dims.x << ' ' << v.geom.dims.y << ' ' << v.geom.dims.z
         << '\n'
         << "ElementSpacing = " << format_double(v.geom.spacing.x) << ' '
         << format_double(v.geom.spacing.y) << ' ' << format_double(v.geom.spacing.z) << '\n'
         << "Offset = " << format_double(v.geom.origin.x) << ' '
         << format_double(v.geom.origin.y) << ' ' << format_double(v.geom.origin.z) << '\n'
         << "ElementType = "
         << (type == MetaElementType::Short
                 ? "MET_SHORT"
                 : type == MetaElementType::Uchar ? "MET_UCHAR" : "MET_FLOAT")
         << '\n'
         << "ElementByteOrderMSB = " << (std::endian::native == std::endian::big ? "True" : "False")
         << '\n'
         << "ElementDataFile = " << (local ? "LOCAL" : raw_name.string()) << '\n';

  const std::size_t n = v.geom.voxel_count();
  std::vector<char> bytes;
  switch (type) {
    case MetaElementType::Short: {
      bytes.resize(n * 2);
      std::int16_t* p = reinterpret_cast<std::int16_t*>(bytes.data());
      for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::int16_t>(std::lrint(v.values[i]));
      break;
    }
    case MetaElementType::Uchar: {
      bytes.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        bytes[i] = static_cast<char>(static_cast<std::uint8_t>(std::lrint(v.values[i])));
      break;
    }
    case MetaElementType::Float: {
      bytes.resize(n * 4);
      std::memcpy(bytes.data(), v.values.data(), n * 4);
      break;
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot write: " + path);
  out << header.str();
  if (local) {
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FileError("write failed: " + path);
  } else {
    const fs::path raw = fs::path(path).parent_path() / raw_name;
    std::ofstream rout(raw, std::ios::binary | std::ios::trunc);
    if (!rout) throw FileError("cannot write: " + raw.string());
    rout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!rout) throw FileError("write failed: " + raw.string());
  }
}

BinaryMask load_mask(const std::string& path) {
  const ScalarVolume v = load_volume(path);
  BinaryMask m(v.geom);
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    if (v.values[i] != 0.0f && v.values[i] != 1.0f)
      throw FileError("mask values must be 0 or 1: " + path);
    m.values[i] = v.values[i] != 0.0f;
  }
  return m;
}

void save_mask(const BinaryMask& m, const std::string& path) {
  ScalarVolume v(m.geom);
  for (std::size_t i = 0; i < m.values.size(); ++i) v.values[i] = m.values[i] ? 1.0f : 0.0f;
  save_volume(v, path, MetaElementType::Uchar);
}

}  // namespace airway
