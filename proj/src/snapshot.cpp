#include "fraclab/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace fraclab {

namespace fs = std::filesystem;

namespace {

void put_le(std::ostream& os, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_le(const unsigned char* bytes) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

fs::path snapshot_stem(const fs::path& path) {
  auto ext = path.extension();
  if (ext == ".bin" || ext == ".json") {
    auto stem = path;
    stem.replace_extension();
    return stem;
  }
  return path;
}

void write_snapshot(const fs::path& path, const Field& u,
                    const SnapshotHeader& header) {
  const auto stem = snapshot_stem(path);
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path());

  const Grid& g = u.grid();
  nlohmann::ordered_json j;
  j["d"] = g.dim();
  j["n"] = g.points_per_axis();
  j["L"] = g.length();
  j["alpha"] = header.alpha;
  j["gamma"] = header.gamma;
  j["label"] = header.label;

  std::ofstream bin(fs::path(stem).concat(".bin"), std::ios::binary);
  if (!bin) throw InvalidInput("cannot write snapshot " + stem.string() + ".bin");
  for (const cplx& z : u.values()) {
    put_le(bin, z.real());
    put_le(bin, z.imag());
  }
  std::ofstream js(fs::path(stem).concat(".json"));
  if (!js) throw InvalidInput("cannot write snapshot " + stem.string() + ".json");
  js << j.dump(2) << "\n";
}

Snapshot read_snapshot(const fs::path& path) {
  const auto stem = snapshot_stem(path);
  const auto jpath = fs::path(stem).concat(".json");
  const auto bpath = fs::path(stem).concat(".bin");
  std::ifstream js(jpath);
  if (!js) throw InvalidInput("missing snapshot header " + jpath.string());
  nlohmann::json j;
  try {
    js >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("malformed snapshot header " + jpath.string() + ": " + e.what());
  }
  SnapshotHeader h;
  try {
    h.d = j.at("d").get<int>();
    h.n = j.at("n").get<int>();
    h.L = j.at("L").get<double>();
    h.alpha = j.at("alpha").get<double>();
    h.gamma = j.at("gamma").get<double>();
    h.label = j.value("label", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("snapshot header " + jpath.string() + ": " + e.what());
  }
  Grid grid(h.d, h.n, h.L);

  std::ifstream bin(bpath, std::ios::binary);
  if (!bin) throw InvalidInput("missing snapshot data " + bpath.string());
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(bin)),
                                 std::istreambuf_iterator<char>());
  if (raw.size() != grid.size() * 16) {
    throw InvalidInput("snapshot " + bpath.string() + " has " +
                       std::to_string(raw.size()) + " bytes, expected " +
                       std::to_string(grid.size() * 16));
  }
  std::vector<cplx> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = {get_le(&raw[16 * i]), get_le(&raw[16 * i + 8])};
  }
  Field f(grid, std::move(values));
  if (!f.all_finite()) throw InvalidInput("snapshot contains non-finite samples");
  return {h, std::move(f)};
}

}  // namespace fraclab
