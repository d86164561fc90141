#include "gridwatch/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "gridwatch/csv.hpp"
#include "gridwatch/error.hpp"
#include "gridwatch/rng.hpp"

namespace gridwatch {

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

Dataset load_dataset(const std::filesystem::path& path, std::optional<Channel> channel) {
  const std::string text = csv::read_file(path);
  Dataset out;
  std::set<std::pair<std::int64_t, Channel>> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_done = false;
  LabeledSeries* current = nullptr;

  auto fail = [&](const std::string& msg) -> Error {
    return Error(path.string() + ": line " + std::to_string(line_no) + ": " + msg);
  };

  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    if (!header_done) {
      if (line != kDatasetHeader) {
        throw fail("bad header, expected '" + std::string(kDatasetHeader) + "'");
      }
      header_done = true;
      continue;
    }

    const auto fields = csv::split(line);
    if (fields.size() != 8) {
      throw fail("expected 8 fields, found " + std::to_string(fields.size()));
    }
    const auto id = csv::parse_int(fields[0]);
    if (!id || *id < 0) throw fail("bad station_id '" + std::string(fields[0]) + "'");
    const auto lat = csv::parse_double(fields[2]);
    const auto lon = csv::parse_double(fields[3]);
    if (!lat || !lon) throw fail("bad coordinates");
    if (*lat < -90.0 || *lat > 90.0 || *lon < -180.0 || *lon > 180.0) {
      throw fail("coordinates out of range");
    }
    Channel ch;
    try {
      ch = parse_channel(fields[4]);
    } catch (const Error& e) {
      throw fail(e.what());
    }
    std::optional<FaultLabel> label;
    if (!fields[5].empty()) {
      try {
        label = parse_fault_label(fields[5]);
      } catch (const Error& e) {
        throw fail(e.what());
      }
    }
    const auto t = csv::parse_int(fields[6]);
    if (!t || *t < 0) throw fail("bad sample index '" + std::string(fields[6]) + "'");
    const auto value = csv::parse_double(fields[7]);
    if (!value) throw fail("bad value '" + std::string(fields[7]) + "'");

    if (channel && ch != *channel) continue;

    const bool continues = current != nullptr && current->series.station.station_id == *id &&
                           current->series.channel == ch;
    if (!continues) {
      if (!seen.insert({*id, ch}).second) {
        throw fail("rows for station " + std::to_string(*id) + " are not contiguous");
      }
      LabeledSeries s;
      s.series.station = StationMeta{*id, std::string(fields[1]), *lat, *lon};
      s.series.channel = ch;
      s.label = label;
      out.push_back(std::move(s));
      current = &out.back();
    } else if (current->label != label) {
      throw fail("label changes within station " + std::to_string(*id));
    }

    auto& values = current->series.values;
    if (static_cast<std::size_t>(*t) != values.size()) {
      throw fail("station " + std::to_string(*id) + ": expected t=" + std::to_string(values.size()) +
                 ", found t=" + std::to_string(*t));
    }
    if (!std::isfinite(*value)) {
      throw fail("non-finite value for station " + std::to_string(*id) + " at index " +
                 std::to_string(*t));
    }
    values.push_back(*value);
  }
  if (!header_done) throw Error(path.string() + ": empty file, missing header");

  for (const auto& s : out) {
    if (s.series.values.size() < 2) {
      throw Error(path.string() + ": station " + std::to_string(s.series.station.station_id) +
                  " has fewer than 2 samples");
    }
  }
  return out;
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::string buf;
  buf.reserve(64 + data.size() * 64);
  buf += kDatasetHeader;
  buf += '\n';
  for (const auto& s : data) {
    const auto& st = s.series.station;
    if (st.name.find_first_of(",\n\r") != std::string::npos) {
      throw Error("station name '" + st.name + "' contains a comma or newline");
    }
    std::string prefix = std::to_string(st.station_id) + ',' + st.name + ',' +
                         csv::format_double(st.latitude) + ',' +
                         csv::format_double(st.longitude) + ',' +
                         std::string(to_string(s.series.channel)) + ',' +
                         (s.label ? std::string(to_string(*s.label)) : std::string()) + ',';
    for (std::size_t t = 0; t < s.series.values.size(); ++t) {
      buf += prefix;
      buf += std::to_string(t);
      buf += ',';
      buf += csv::format_double(s.series.values[t]);
      buf += '\n';
    }
  }
  csv::write_file(path, buf);
}

// ---------------------------------------------------------------------------
// Scenario generation
// ---------------------------------------------------------------------------

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Zone centres (lat, lon) inside the generated bounding box.
constexpr std::array<std::array<double, 2>, kNumZones> kZoneCentres = {{
    {47.8, -122.5},
    {46.0, -118.0},
    {44.0, -123.0},
    {43.0, -117.5},
    {48.5, -117.0},
}};

// Signed level-to-dynamics mix per zone. Min-max normalization keeps these
// shape differences, which is what makes zones recoverable by DTW clustering.
constexpr std::array<double, kNumZones> kZoneLevel = {1.2, 4.0, -1.2, -4.0, 2.2};
constexpr std::array<double, kNumZones> kZoneAmplitudeOffset = {-0.2, -0.1, 0.0, 0.1, 0.2};

double rise(double rate, double tau) { return 1.0 - std::exp(-rate * tau); }

}  // namespace

SignatureParams default_signature(FaultLabel label) {
  switch (label) {
    case FaultLabel::DroppedLoad:  // step
      return {0.02, 1.0 / 6.0, 2.2, 1.0 / 0.15};
    case FaultLabel::OpenAC:  // square perturbation
      return {0.02, 0.0, 1.0 / 1.2, 1.0 / 0.3};
    case FaultLabel::OpenDC:  // double step
      return {0.02, 0.1, 0.45, 1.0 / 0.6};
    case FaultLabel::OpenGenerator:  // exponential sag
      return {0.02, 1.0 / 3.0, 1.5, 1.0};
    case FaultLabel::GMD2:  // ramp
      return {0.02, 1.0 / 12.0, 0.3, 1.0 / 8.0};
    case FaultLabel::IceStorm:  // damped sinusoid
      return {0.02, 1.0 / 12.0, 0.9, 5.0};
    case FaultLabel::McNaryAttack:  // spike train
      return {0.02, 0.0, 2.0, 4.0};
    case FaultLabel::Ponderosa:  // growing sinusoid
      return {0.02, -1.0 / 8.0, 0.6, 2.5};
    case FaultLabel::Quake1:  // chirp
      return {0.02, 0.0, 0.4, 1.0 / 0.35};
  }
  return {};
}

double signature_value(FaultLabel label, const SignatureParams& p, double amplitude,
                       double level_ratio, int samples_after_onset, double sample_rate_hz) {
  const double tau = samples_after_onset / sample_rate_hz;
  const double envelope = std::exp(-p.decay_rate * tau);
  const double wave = std::sin(kTwoPi * p.oscillation_hz * tau);
  double level = 0.0;
  double dynamic = 0.0;
  switch (label) {
    case FaultLabel::DroppedLoad:
      level = rise(p.ramp_slope, tau);
      dynamic = envelope * wave;
      break;
    case FaultLabel::OpenAC:
      level = rise(p.ramp_slope, tau);
      dynamic = envelope * std::tanh(4.0 * wave);
      break;
    case FaultLabel::OpenDC:
      level = rise(p.ramp_slope, tau);
      if (tau > 4.0) level += 0.6 * rise(p.ramp_slope, tau - 4.0);
      dynamic = envelope * wave;
      break;
    case FaultLabel::OpenGenerator:
      level = -rise(p.ramp_slope, tau);
      dynamic = envelope * wave;
      break;
    case FaultLabel::GMD2:
      level = 0.4 * rise(1.0 / 0.3, tau) + 0.6 * std::min(p.ramp_slope * tau, 1.0);
      dynamic = 0.6 * envelope * wave;
      break;
    case FaultLabel::IceStorm:
      level = -rise(p.ramp_slope, tau);
      dynamic = envelope * wave;
      break;
    case FaultLabel::McNaryAttack: {
      level = -rise(p.ramp_slope, tau);
      const int period = std::max(2, static_cast<int>(std::lround(sample_rate_hz / p.oscillation_hz)));
      dynamic = envelope * ((samples_after_onset % period) < 2 ? 1.5 : 0.0);
      break;
    }
    case FaultLabel::Ponderosa:
      // Grows at |decay_rate| until it saturates 40 s after onset.
      level = rise(p.ramp_slope, tau);
      dynamic = std::min(std::exp(std::abs(p.decay_rate) * (tau - 40.0)), 1.0) * wave;
      break;
    case FaultLabel::Quake1: {
      level = -rise(p.ramp_slope, tau);
      const double f = p.oscillation_hz + 1.3 * std::min(tau / 30.0, 1.0);
      dynamic = envelope * std::sin(kTwoPi * f * tau);
      break;
    }
  }
  return amplitude * (level_ratio * level + dynamic);
}

void ScenarioSpec::validate() const {
  auto bad = [](const std::string& msg) { throw Error("invalid scenario: " + msg); };
  if (n_stations < 1) bad("n_stations must be >= 1");
  if (series_length < 3) bad("series_length must be >= 3");
  if (onset_index < 2 || onset_index >= series_length) {
    bad("onset_index must satisfy 2 <= onset_index < series_length");
  }
  if (onset_jitter < 0) bad("onset_jitter must be >= 0");
  if (onset_index - onset_jitter < 2 || onset_index + onset_jitter >= series_length) {
    bad("onset_index +/- onset_jitter must stay within [2, series_length)");
  }
  if (!(noise_sigma > 0.0) || !std::isfinite(noise_sigma)) bad("noise_sigma must be > 0");
  if (!std::isfinite(baseline)) bad("baseline must be finite");
  if (!(geo_attenuation >= 0.0) || geo_attenuation >= 5.0) {
    bad("geo_attenuation must be in [0, 5)");
  }
  if (!(long_fraction >= 0.0 && long_fraction <= 1.0)) bad("long_fraction must be in [0, 1]");
  if (long_length < series_length) bad("long_length must be >= series_length");
  if (!(sample_rate_hz > 0.0)) bad("sample_rate_hz must be > 0");
  if (!(signature.amplitude > 0.0) || !std::isfinite(signature.amplitude)) {
    bad("amplitude must be > 0");
  }
  if (!(signature.oscillation_hz > 0.0)) bad("oscillation_hz must be > 0");
  if (!(signature.ramp_slope > 0.0)) bad("ramp_slope must be > 0");
  if (!std::isfinite(signature.decay_rate)) bad("decay_rate must be finite");
  if (first_station_id < 0) bad("first_station_id must be >= 0");
}

ScenarioSpec parse_scenario_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("scenario config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  ScenarioSpec spec;
  if (auto it = kv.find("fault_class"); it != kv.end()) {
    spec.fault_class = parse_fault_label(it->second);
    kv.erase(it);
  }
  spec.signature = default_signature(spec.fault_class);

  auto num = [](const std::string& key, const std::string& v) {
    auto d = csv::parse_double(v);
    if (!d) throw Error("scenario config: bad number for '" + key + "': '" + v + "'");
    return *d;
  };
  auto integer = [](const std::string& key, const std::string& v) {
    auto i = csv::parse_int(v);
    if (!i) throw Error("scenario config: bad integer for '" + key + "': '" + v + "'");
    return *i;
  };

  for (const auto& [key, value] : kv) {
    if (key == "n_stations") spec.n_stations = static_cast<int>(integer(key, value));
    else if (key == "series_length") spec.series_length = static_cast<int>(integer(key, value));
    else if (key == "baseline") spec.baseline = num(key, value);
    else if (key == "noise_sigma") spec.noise_sigma = num(key, value);
    else if (key == "onset_index") spec.onset_index = static_cast<int>(integer(key, value));
    else if (key == "onset_jitter") spec.onset_jitter = static_cast<int>(integer(key, value));
    else if (key == "amplitude") spec.signature.amplitude = num(key, value);
    else if (key == "decay_rate") spec.signature.decay_rate = num(key, value);
    else if (key == "oscillation_hz") spec.signature.oscillation_hz = num(key, value);
    else if (key == "ramp_slope") spec.signature.ramp_slope = num(key, value);
    else if (key == "geo_attenuation") spec.geo_attenuation = num(key, value);
    else if (key == "long_fraction") spec.long_fraction = num(key, value);
    else if (key == "long_length") spec.long_length = static_cast<int>(integer(key, value));
    else if (key == "sample_rate_hz") spec.sample_rate_hz = num(key, value);
    else if (key == "seed") spec.seed = static_cast<std::uint64_t>(integer(key, value));
    else if (key == "layout_seed") spec.layout_seed = static_cast<std::uint64_t>(integer(key, value));
    else if (key == "first_station_id") spec.first_station_id = integer(key, value);
    else throw Error("scenario config: unknown key '" + key + "'");
  }
  spec.validate();
  return spec;
}

ScenarioSpec load_scenario_config(const std::filesystem::path& path) {
  return parse_scenario_config(csv::read_file(path));
}

std::vector<StationSite> station_layout(int n_stations, std::uint64_t layout_seed) {
  auto rng = stream_for(layout_seed, 0);
  std::uniform_real_distribution<double> lat_dist(42.0, 49.0);
  std::uniform_real_distribution<double> lon_dist(-124.0, -116.0);
  std::vector<StationSite> sites;
  sites.reserve(static_cast<std::size_t>(n_stations));
  for (int i = 0; i < n_stations; ++i) {
    StationSite site;
    site.meta.latitude = lat_dist(rng);
    site.meta.longitude = lon_dist(rng);
    char name[16];
    std::snprintf(name, sizeof(name), "bus%03d", i);
    site.meta.name = name;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < kNumZones; ++z) {
      const double dlat = site.meta.latitude - kZoneCentres[z][0];
      const double dlon = site.meta.longitude - kZoneCentres[z][1];
      const double d = dlat * dlat + dlon * dlon;
      if (d < best) {
        best = d;
        site.zone = static_cast<int>(z);
      }
    }
    sites.push_back(std::move(site));
  }
  return sites;
}

std::vector<GeneratedSeries> generate_scenario(const ScenarioSpec& spec) {
  spec.validate();
  const auto sites = station_layout(spec.n_stations, spec.layout_seed);
  std::vector<GeneratedSeries> out;
  out.reserve(sites.size());

  for (std::size_t i = 0; i < sites.size(); ++i) {
    auto rng = stream_for(spec.seed, i);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> jitter(-spec.onset_jitter, spec.onset_jitter);
    std::uniform_real_distribution<double> spread(0.95, 1.05);
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);

    const bool is_long = unit(rng) < spec.long_fraction;
    const int length = is_long ? spec.long_length : spec.series_length;
    const int onset = spec.onset_index + jitter(rng) + (length - spec.series_length);
    const int zone = sites[i].zone;
    const double zone_amp = 1.0 + spec.geo_attenuation * kZoneAmplitudeOffset[zone];
    const double amplitude = spec.signature.amplitude * zone_amp * spread(rng);
    const double level_ratio = kZoneLevel[zone] * spread(rng);

    GeneratedSeries g;
    g.zone = zone;
    g.onset = onset;
    g.amplitude = amplitude;
    g.level_ratio = level_ratio;
    g.data.label = spec.fault_class;
    auto& ts = g.data.series;
    ts.station = sites[i].meta;
    ts.station.station_id = spec.first_station_id + static_cast<std::int64_t>(i);
    ts.channel = Channel::Frequency;
    ts.sample_rate_hz = spec.sample_rate_hz;
    ts.values.resize(static_cast<std::size_t>(length));
    for (int t = 0; t < length; ++t) {
      double v = spec.baseline + noise(rng);
      if (t >= onset) {
        v += signature_value(spec.fault_class, spec.signature, amplitude, level_ratio, t - onset,
                             spec.sample_rate_hz);
      }
      ts.values[static_cast<std::size_t>(t)] = v;
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<GeneratedSeries> generate_corpus(const CorpusSpec& spec) {
  std::vector<GeneratedSeries> out;
  std::int64_t next_id = 0;
  for (std::size_t c = 0; c < kNumFaultClasses; ++c) {
    const int wanted = spec.class_counts[c];
    if (wanted < 0) throw Error("class counts must be non-negative");
    int produced = 0;
    for (std::uint64_t event = 0; produced < wanted; ++event) {
      ScenarioSpec s;
      s.fault_class = kAllFaultLabels[c];
      s.signature = default_signature(s.fault_class);
      s.n_stations = spec.n_stations;
      s.series_length = spec.series_length;
      s.noise_sigma = spec.noise_sigma;
      s.geo_attenuation = spec.geo_attenuation;
      s.long_fraction = spec.long_fraction;
      s.layout_seed = spec.layout_seed;
      s.onset_index = spec.series_length / 3;
      s.onset_jitter = std::min({300, s.onset_index - 2, s.series_length - s.onset_index - 1});
      s.seed = splitmix64(splitmix64(spec.seed) + 0x100 * c + event);
      s.first_station_id = next_id;
      auto batch = generate_scenario(s);
      for (auto& g : batch) {
        if (produced == wanted) break;
        g.data.series.station.station_id = next_id++;
        out.push_back(std::move(g));
        ++produced;
      }
    }
  }
  return out;
}

Dataset to_dataset(const std::vector<GeneratedSeries>& generated) {
  Dataset d;
  d.reserve(generated.size());
  for (const auto& g : generated) d.push_back(g.data);
  return d;
}

}  // namespace gridwatch
