#include "gridwatch/types.hpp"

#include "gridwatch/error.hpp"

namespace gridwatch {

namespace {

constexpr std::array<std::string_view, kNumFaultClasses> kLabelNames = {
    "DroppedLoad", "OpenAC",       "OpenDC",    "OpenGenerator", "GMD2",
    "IceStorm",    "McNaryAttack", "Ponderosa", "Quake1",
};

}  // namespace

std::string_view to_string(FaultLabel label) {
  return kLabelNames.at(static_cast<std::size_t>(label));
}

FaultLabel parse_fault_label(std::string_view text) {
  for (std::size_t i = 0; i < kLabelNames.size(); ++i) {
    if (kLabelNames[i] == text) return static_cast<FaultLabel>(i);
  }
  std::string valid;
  for (auto name : kLabelNames) {
    if (!valid.empty()) valid += ", ";
    valid += name;
  }
  throw Error("unknown fault label '" + std::string(text) + "' (valid labels: " + valid + ")");
}

FaultLabel fault_label_from_code(int code) {
  if (code < 0 || code >= static_cast<int>(kNumFaultClasses)) {
    throw Error("fault label code out of range: " + std::to_string(code));
  }
  return static_cast<FaultLabel>(code);
}

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::Frequency:
      return "frequency";
    case Channel::Voltage:
      return "voltage";
    case Channel::PhaseAngle:
      return "phase_angle";
  }
  return "frequency";
}

Channel parse_channel(std::string_view text) {
  if (text == "frequency") return Channel::Frequency;
  if (text == "voltage") return Channel::Voltage;
  if (text == "phase_angle") return Channel::PhaseAngle;
  throw Error("unknown channel '" + std::string(text) +
              "' (valid channels: frequency, voltage, phase_angle)");
}

}  // namespace gridwatch
