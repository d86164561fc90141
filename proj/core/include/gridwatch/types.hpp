#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridwatch {

/// Fault classes. The integer codes are stable and used in every file format.
enum class FaultLabel : std::uint8_t {
  DroppedLoad = 0,
  OpenAC = 1,
  OpenDC = 2,
  OpenGenerator = 3,
  GMD2 = 4,
  IceStorm = 5,
  McNaryAttack = 6,
  Ponderosa = 7,
  Quake1 = 8,
};

inline constexpr std::size_t kNumFaultClasses = 9;

inline constexpr std::array<FaultLabel, kNumFaultClasses> kAllFaultLabels = {
    FaultLabel::DroppedLoad, FaultLabel::OpenAC,       FaultLabel::OpenDC,
    FaultLabel::OpenGenerator, FaultLabel::GMD2,       FaultLabel::IceStorm,
    FaultLabel::McNaryAttack, FaultLabel::Ponderosa,   FaultLabel::Quake1,
};

std::string_view to_string(FaultLabel label);
/// Parses a label name; throws Error listing the valid names otherwise.
FaultLabel parse_fault_label(std::string_view text);
/// Label for code 0..8; throws Error for anything else.
FaultLabel fault_label_from_code(int code);
inline int code_of(FaultLabel label) { return static_cast<int>(label); }

enum class Channel : std::uint8_t { Frequency, Voltage, PhaseAngle };

std::string_view to_string(Channel channel);
Channel parse_channel(std::string_view text);

struct StationMeta {
  std::int64_t station_id = 0;
  std::string name;
  double latitude = 0.0;
  double longitude = 0.0;

  bool operator==(const StationMeta&) const = default;
};

/// One station's sampled channel.
struct TimeSeries {
  StationMeta station;
  Channel channel = Channel::Frequency;
  double sample_rate_hz = 30.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool operator==(const TimeSeries&) const = default;
};

struct LabeledSeries {
  TimeSeries series;
  std::optional<FaultLabel> label;

  bool operator==(const LabeledSeries&) const = default;
};

using Dataset = std::vector<LabeledSeries>;

}  // namespace gridwatch
