#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "curveflow/harness.hpp"

namespace curveflow::cli {

/// Overlay of curve snapshots as a standalone SVG document. Coordinates are
/// fitted to the joint bounding box with a 5% margin, aspect preserved, and
/// printed with six decimals so output is byte-for-byte reproducible.
/// First frame solid blue, last solid red, intermediate frames dashed grey.
std::string snapshots_svg(const std::vector<Snapshot>& snapshots,
                          const RenderOptions& options);

/// One SVG per snapshot, all sharing the joint bounding box so the frames
/// are directly comparable.
std::vector<std::string> frame_svgs(const std::vector<Snapshot>& snapshots,
                                    const RenderOptions& options);

/// Log-log error-vs-h plot per checkpoint time with a slope-2 guide line.
std::string convergence_svg(const std::vector<ConvergenceEntry>& table,
                            const RenderOptions& options);

}  // namespace curveflow::cli
