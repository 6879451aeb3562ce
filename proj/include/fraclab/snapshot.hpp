#pragma once

#include <filesystem>
#include <string>

#include "fraclab/grid.hpp"

namespace fraclab {

/// Sidecar header of a field snapshot.
struct SnapshotHeader {
  int d = 2;
  int n = 128;
  double L = 160.0;
  double alpha = 0.6;
  double gamma = 0.5;
  std::string label;
};

/// Snapshot files come in pairs: `<stem>.bin` holds little-endian float64
/// (re, im) pairs in row-major order, `<stem>.json` holds the header.
/// `path` may name either file or the bare stem.
void write_snapshot(const std::filesystem::path& path, const Field& u,
                    const SnapshotHeader& header);

struct Snapshot {
  SnapshotHeader header;
  Field field;
};

Snapshot read_snapshot(const std::filesystem::path& path);

std::filesystem::path snapshot_stem(const std::filesystem::path& path);

}  // namespace fraclab
