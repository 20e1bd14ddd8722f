#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gazeforge/core.hpp"
#include "gazeforge/eval.hpp"
#include "gazeforge/mapping.hpp"
#include "gazeforge/saliency.hpp"

namespace gazeforge::io {

inline constexpr std::string_view kVelocityHeader = "t_ms,velocity_deg_s,label";
inline constexpr std::string_view kGazeHeader = "t_ms,velocity_deg_s,label,x_px,y_px";
inline constexpr std::string_view kTargetsHeader = "x_px,y_px,weight";
inline constexpr std::string_view kFrameTargetsHeader = "frame,x_px,y_px,weight";
inline constexpr std::string_view kSummaryHeader = "type,stat,value";
inline constexpr std::string_view kPooledHeader = "type,squared_error";

/// Fixed-point with three decimals, '.' separator, no negative zero.
std::string format_fixed3(double v);
/// Six significant digits, shortest general notation.
std::string format_sig6(double v);
/// Shortest representation that round-trips.
std::string format_exact(double v);

// Velocity and gaze traces. Timestamps are written in milliseconds and read
// back in seconds. Readers validate the header verbatim, reject malformed
// rows with their line number and require strictly increasing timestamps.

std::string write_velocity_csv(const SampledSignal& signal);
SampledSignal read_velocity_csv(std::string_view text);

std::string write_gaze_csv(const GazeTrace& trace);
/// Stimulus size and pixels_per_degree are not stored in the file; the
/// caller fills them in.
GazeTrace read_gaze_csv(std::string_view text);

std::string write_targets_csv(const TargetSet& targets);
/// Targets of every frame of a scene, tagged with the frame index.
std::string write_scene_targets_csv(const SceneTargets& scene);
std::string write_summary_csv(const ErrorSummary& summary);
std::string write_pooled_errors_csv(const ErrorSummary& summary);

/// Decodes a P2 or P5 graymap (maxval 1..65535) into values in [0,1].
/// Errors carry the byte offset of the problem.
Grid read_pgm(std::string_view bytes);
/// Encodes as P5 with maxval 255, rounding half up.
std::string write_pgm(const Grid& image);

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

Grid load_pgm(const std::filesystem::path& path);
/// Regular files ending in .pgm, ordered by the number embedded in their name
/// (then by name).
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

}  // namespace gazeforge::io
