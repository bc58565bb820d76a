#include "aerovox/io.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace aerovox {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

void read_exact(std::istream& in, void* dst, size_t n, const std::string& what) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<size_t>(in.gcount()) != n) throw IoError("short read in " + what);
}

template <typename T>
T read_le(std::istream& in, const std::string& what) {
  T v;
  read_exact(in, &v, sizeof(T), what);
  return v;
}

template <typename T>
void write_le(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  size_t b = s.find_last_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

// --------------------------------------------------------------------------
// PLY

namespace {

enum class ScalarType { F32, F64, U16 };

struct PlyProperty {
  ScalarType type;
  std::string name;
};

struct PlyHeader {
  bool binary = false;
  size_t vertex_count = 0;
  std::vector<PlyProperty> properties;
};

PlyHeader parse_ply_header(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "ply") throw IoError("not a PLY file: " + path);

  PlyHeader h;
  bool in_vertex = false;
  bool have_format = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.rfind("comment", 0) == 0) continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "format") {
      std::string fmt, ver;
      ls >> fmt >> ver;
      if (fmt == "ascii")
        h.binary = false;
      else if (fmt == "binary_little_endian")
        h.binary = true;
      else
        throw IoError("unsupported PLY format '" + fmt + "': " + path);
      have_format = true;
    } else if (tok == "element") {
      std::string name;
      size_t count = 0;
      ls >> name >> count;
      if (name == "vertex") {
        h.vertex_count = count;
        in_vertex = true;
      } else {
        if (count > 0) throw IoError("unsupported PLY element '" + name + "': " + path);
        in_vertex = false;
      }
    } else if (tok == "property") {
      if (!in_vertex) continue;
      std::string type, name;
      ls >> type >> name;
      ScalarType st;
      if (type == "float" || type == "float32")
        st = ScalarType::F32;
      else if (type == "double" || type == "float64")
        st = ScalarType::F64;
      else if (type == "ushort" || type == "uint16")
        st = ScalarType::U16;
      else
        throw IoError("unsupported PLY property type '" + type + "': " + path);
      h.properties.push_back({st, name});
    } else if (tok == "end_header") {
      if (!have_format) throw IoError("PLY header missing format line: " + path);
      return h;
    } else {
      throw IoError("unexpected PLY header line '" + line + "': " + path);
    }
  }
  throw IoError("PLY header not terminated: " + path);
}

}  // namespace

SemanticPointCloud read_point_cloud(const std::string& path) {
  std::ifstream in = open_in(path);
  const PlyHeader h = parse_ply_header(in, path);

  int ix = -1, iy = -1, iz = -1, icls = -1;
  for (size_t p = 0; p < h.properties.size(); ++p) {
    const std::string& n = h.properties[p].name;
    const bool is_float = h.properties[p].type != ScalarType::U16;
    if (n == "x" && is_float)
      ix = static_cast<int>(p);
    else if (n == "y" && is_float)
      iy = static_cast<int>(p);
    else if (n == "z" && is_float)
      iz = static_cast<int>(p);
    else if (n == "class" && h.properties[p].type == ScalarType::U16)
      icls = static_cast<int>(p);
    else
      throw IoError("unsupported PLY vertex property '" + n + "': " + path);
  }
  if (ix < 0 || iy < 0 || iz < 0) throw IoError("PLY lacks x/y/z float properties: " + path);

  SemanticPointCloud cloud;
  cloud.reserve(h.vertex_count);
  std::vector<double> row(h.properties.size(), 0.0);

  if (h.binary) {
    for (size_t v = 0; v < h.vertex_count; ++v) {
      for (size_t p = 0; p < h.properties.size(); ++p) {
        switch (h.properties[p].type) {
          case ScalarType::F32:
            row[p] = read_le<float>(in, path);
            break;
          case ScalarType::F64:
            row[p] = read_le<double>(in, path);
            break;
          case ScalarType::U16:
            row[p] = read_le<std::uint16_t>(in, path);
            break;
        }
      }
      cloud.push_back(Vec3(row[ix], row[iy], row[iz]),
                      icls >= 0 ? static_cast<std::uint16_t>(row[icls]) : 0);
    }
  } else {
    for (size_t v = 0; v < h.vertex_count; ++v) {
      for (size_t p = 0; p < h.properties.size(); ++p)
        if (!(in >> row[p])) throw IoError("short ascii PLY body: " + path);
      cloud.push_back(Vec3(row[ix], row[iy], row[iz]),
                      icls >= 0 ? static_cast<std::uint16_t>(row[icls]) : 0);
    }
  }
  return cloud;
}

void write_point_cloud(const std::string& path, const SemanticPointCloud& cloud,
                       bool binary) {
  cloud.check_consistent();
  std::ofstream out = open_out(path);
  out << "ply\n"
      << (binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n")
      << "element vertex " << cloud.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n"
      << "property ushort class\nend_header\n";
  if (binary) {
    for (size_t i = 0; i < cloud.size(); ++i) {
      write_le(out, cloud.positions[i].x());
      write_le(out, cloud.positions[i].y());
      write_le(out, cloud.positions[i].z());
      write_le(out, cloud.labels[i]);
    }
  } else {
    out << std::setprecision(17);
    for (size_t i = 0; i < cloud.size(); ++i)
      out << cloud.positions[i].x() << " " << cloud.positions[i].y() << " "
          << cloud.positions[i].z() << " " << cloud.labels[i] << "\n";
  }
  finish(out, path);
}

// --------------------------------------------------------------------------
// Cameras

std::vector<CameraFrame> read_cameras(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<CameraFrame> frames;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::istringstream ls(line);
    CameraFrame f;
    std::array<double, 12> m{};
    if (!(ls >> f.id >> f.intrinsics.fx >> f.intrinsics.fy >> f.intrinsics.cx >>
          f.intrinsics.cy >> f.intrinsics.width >> f.intrinsics.height))
      throw IoError("bad camera line " + std::to_string(line_no) + ": " + path);
    for (double& v : m)
      if (!(ls >> v)) throw IoError("bad camera line " + std::to_string(line_no) + ": " + path);
    f.pose.rotation << m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7], m[8];
    f.pose.translation = Vec3(m[9], m[10], m[11]);
    try {
      f.intrinsics.validate();
      f.pose.validate();
    } catch (const std::exception& e) {
      throw IoError("camera line " + std::to_string(line_no) + " invalid (" + e.what() +
                    "): " + path);
    }
    frames.push_back(f);
  }
  return frames;
}

void write_cameras(const std::string& path, const std::vector<CameraFrame>& frames) {
  std::ofstream out = open_out(path);
  out << "# id fx fy cx cy width height r00..r22 tx ty tz (world-to-camera)\n"
      << std::setprecision(17);
  for (const CameraFrame& f : frames) {
    out << f.id << " " << f.intrinsics.fx << " " << f.intrinsics.fy << " " << f.intrinsics.cx
        << " " << f.intrinsics.cy << " " << f.intrinsics.width << " " << f.intrinsics.height;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out << " " << f.pose.rotation(r, c);
    for (int i = 0; i < 3; ++i) out << " " << f.pose.translation[i];
    out << "\n";
  }
  finish(out, path);
}

// --------------------------------------------------------------------------
// Raw images

namespace {

std::pair<int, int> read_image_header(std::istream& in, const std::string& path) {
  const auto w = read_le<std::uint32_t>(in, path);
  const auto h = read_le<std::uint32_t>(in, path);
  if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20))
    throw IoError("implausible image dims in " + path);
  return {static_cast<int>(w), static_cast<int>(h)};
}

}  // namespace

DepthMap read_depth_raw(const std::string& path) {
  std::ifstream in = open_in(path);
  const auto [w, h] = read_image_header(in, path);
  DepthMap depth(w, h, 0.0f);
  read_exact(in, depth.data.data(), depth.data.size() * sizeof(float), path);
  return depth;
}

void write_depth_raw(const std::string& path, const DepthMap& depth) {
  std::ofstream out = open_out(path);
  write_le(out, static_cast<std::uint32_t>(depth.width));
  write_le(out, static_cast<std::uint32_t>(depth.height));
  out.write(reinterpret_cast<const char*>(depth.data.data()),
            static_cast<std::streamsize>(depth.data.size() * sizeof(float)));
  finish(out, path);
}

Image<std::uint8_t> read_mask_raw(const std::string& path) {
  std::ifstream in = open_in(path);
  const auto [w, h] = read_image_header(in, path);
  Image<std::uint8_t> mask(w, h, 0);
  read_exact(in, mask.data.data(), mask.data.size(), path);
  return mask;
}

void write_mask_raw(const std::string& path, const Image<std::uint8_t>& mask) {
  std::ofstream out = open_out(path);
  write_le(out, static_cast<std::uint32_t>(mask.width));
  write_le(out, static_cast<std::uint32_t>(mask.height));
  out.write(reinterpret_cast<const char*>(mask.data.data()),
            static_cast<std::streamsize>(mask.data.size()));
  finish(out, path);
}

// --------------------------------------------------------------------------
// Dense volume

namespace {
constexpr char kVolMagic[8] = {'A', 'V', 'O', 'X', 'V', 'O', 'L', '1'};
}

SceneGrid read_volume(const std::string& path) {
  std::ifstream in = open_in(path);
  char magic[8];
  read_exact(in, magic, 8, path);
  if (std::memcmp(magic, kVolMagic, 8) != 0) throw IoError("bad volume magic: " + path);

  GridSpec spec;
  const auto x = read_le<std::uint32_t>(in, path);
  const auto y = read_le<std::uint32_t>(in, path);
  const auto z = read_le<std::uint32_t>(in, path);
  spec.dims = Vec3i(static_cast<int>(x), static_cast<int>(y), static_cast<int>(z));
  spec.r = read_le<double>(in, path);
  for (int a = 0; a < 3; ++a) spec.origin[a] = read_le<double>(in, path);
  try {
    spec.validate();
  } catch (const std::exception& e) {
    throw IoError(std::string("bad volume header (") + e.what() + "): " + path);
  }

  SceneGrid grid(spec);
  read_exact(in, grid.labels.labels.data(), grid.labels.labels.size() * sizeof(std::uint16_t),
             path);
  return grid;
}

void write_volume(const std::string& path, const SceneGrid& grid) {
  grid.spec.validate();
  std::ofstream out = open_out(path);
  out.write(kVolMagic, 8);
  for (int a = 0; a < 3; ++a) write_le(out, static_cast<std::uint32_t>(grid.spec.dims[a]));
  write_le(out, grid.spec.r);
  for (int a = 0; a < 3; ++a) write_le(out, grid.spec.origin[a]);
  out.write(reinterpret_cast<const char*>(grid.labels.labels.data()),
            static_cast<std::streamsize>(grid.labels.labels.size() * sizeof(std::uint16_t)));
  finish(out, path);
}

// --------------------------------------------------------------------------
// Taxonomy

Taxonomy read_taxonomy(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<ClassSpec> classes;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::istringstream ls(line);
    ClassSpec c;
    std::string group;
    int min_pts = 0;
    if (!(ls >> c.id >> c.name >> group >> c.frequency >> c.dbscan_eps >> min_pts))
      throw IoError("bad taxonomy line " + std::to_string(line_no) + ": " + path);
    c.dbscan_min_pts = min_pts;
    if (group == "instance")
      c.group = ClassGroup::Instance;
    else if (group == "ground")
      c.group = ClassGroup::Ground;
    else if (group == "others")
      c.group = ClassGroup::Others;
    else
      throw IoError("bad taxonomy group '" + group + "' line " + std::to_string(line_no) +
                    ": " + path);
    classes.push_back(c);
  }
  try {
    return Taxonomy(classes);
  } catch (const std::exception& e) {
    throw IoError(std::string("invalid taxonomy (") + e.what() + "): " + path);
  }
}

void write_taxonomy(const std::string& path, const Taxonomy& taxonomy) {
  std::ofstream out = open_out(path);
  out << "# id name group frequency dbscan_eps dbscan_min_pts\n" << std::setprecision(17);
  for (const ClassSpec& c : taxonomy.classes()) {
    const char* group = c.group == ClassGroup::Instance
                            ? "instance"
                            : (c.group == ClassGroup::Ground ? "ground" : "others");
    out << c.id << " " << c.name << " " << group << " " << c.frequency << " " << c.dbscan_eps
        << " " << c.dbscan_min_pts << "\n";
  }
  finish(out, path);
}

// --------------------------------------------------------------------------
// Id lists

std::vector<int> read_id_list(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<int> ids;
  std::string line;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    ids.push_back(std::stoi(line));
  }
  return ids;
}

void write_id_list(const std::string& path, const std::vector<int>& ids,
                   const std::string& header_comment) {
  std::ofstream out = open_out(path);
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  for (int id : ids) out << id << "\n";
  finish(out, path);
}

// --------------------------------------------------------------------------
// Samples

std::string sample_basename(int frame_id) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", frame_id);
  return buf;
}

namespace {

void write_bits(const std::string& path, const BitVolume& bits) {
  std::ofstream out = open_out(path);
  out.write(reinterpret_cast<const char*>(bits.bytes.data()),
            static_cast<std::streamsize>(bits.bytes.size()));
  finish(out, path);
}

BitVolume read_bits(const std::string& path, const Vec3i& dims) {
  std::ifstream in = open_in(path);
  BitVolume bits(dims);
  read_exact(in, bits.bytes.data(), bits.bytes.size(), path);
  char extra;
  if (in.read(&extra, 1); in.gcount() != 0) throw IoError("trailing bytes in " + path);
  return bits;
}

}  // namespace

void write_sample(const SampleRecord& record, const std::string& dir) {
  if (record.frame_id < 0) throw IoError("write_sample: negative frame id");
  const Vec3i dims = record.labels.dims;
  if (!dims_equal(record.masks.invalid.dims, dims) ||
      !dims_equal(record.masks.surface.dims, dims) ||
      !dims_equal(record.masks.occluded.dims, dims))
    throw IoError("write_sample: mask dims disagree with labels");

  const std::string base = (std::filesystem::path(dir) / sample_basename(record.frame_id)).string();
  {
    std::ofstream out = open_out(base + ".label");
    out.write(reinterpret_cast<const char*>(record.labels.labels.data()),
              static_cast<std::streamsize>(record.labels.labels.size() * sizeof(std::uint16_t)));
    finish(out, base + ".label");
  }
  write_bits(base + ".invalid", record.masks.invalid);
  write_bits(base + ".occluded", record.masks.occluded);
  write_bits(base + ".surface", record.masks.surface);
  if (record.depth.width > 0) write_depth_raw(base + ".depth", record.depth);
}

SampleRecord read_sample(const std::string& dir, int frame_id, const Vec3i& dims,
                         bool with_depth) {
  if (dims.minCoeff() <= 0) throw IoError("read_sample: bad dims");
  const std::string base = (std::filesystem::path(dir) / sample_basename(frame_id)).string();

  SampleRecord record;
  record.frame_id = frame_id;
  record.labels = LabelVolume(dims);
  {
    std::ifstream in = open_in(base + ".label");
    read_exact(in, record.labels.labels.data(),
               record.labels.labels.size() * sizeof(std::uint16_t), base + ".label");
    char extra;
    if (in.read(&extra, 1); in.gcount() != 0)
      throw IoError("label file larger than configured dims: " + base + ".label");
  }
  record.masks.invalid = read_bits(base + ".invalid", dims);
  record.masks.occluded = read_bits(base + ".occluded", dims);
  record.masks.surface = read_bits(base + ".surface", dims);
  if (with_depth && std::filesystem::exists(base + ".depth"))
    record.depth = read_depth_raw(base + ".depth");
  return record;
}

}  // namespace aerovox
