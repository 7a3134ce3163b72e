#include "evps/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace evps {

namespace {

constexpr char kBinaryMagic[4] = {'E', 'V', 'T', '1'};

std::string sync_path(const std::string& path) { return path + ".sync"; }

long long to_micros(double seconds) { return std::llround(seconds * 1e6); }
std::uint64_t to_nanos(double seconds) {
  return static_cast<std::uint64_t>(std::llround(seconds * 1e9));
}

void write_syncs(const std::string& path, const std::vector<double>& syncs) {
  std::ofstream out(sync_path(path));
  if (!out) throw ParseError("cannot write sync file " + sync_path(path));
  for (double s : syncs) out << to_micros(s) << "\n";
}

std::vector<double> read_syncs(const std::string& path) {
  std::vector<double> syncs;
  std::ifstream in(sync_path(path));
  if (!in) return syncs;  // sync companion is optional on read
  std::string line;
  int lineno = 0;
  double prev = -1.0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    char* end = nullptr;
    const long long us = std::strtoll(line.c_str(), &end, 10);
    if (end == line.c_str() || *end != '\0')
      throw ParseError(sync_path(path) + ":" + std::to_string(lineno) +
                       ": malformed sync time");
    const double t = us * 1e-6;
    if (t <= prev)
      throw ParseError(sync_path(path) + ":" + std::to_string(lineno) +
                       ": sync times must be strictly increasing");
    prev = t;
    syncs.push_back(t);
  }
  return syncs;
}

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> buf;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(buf.data()), buf.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> buf;
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

}  // namespace

void EventStream::validate() const {
  double prev = -1.0;
  std::size_t index = 0;
  for (const Event& ev : events) {
    if (ev.polarity != 1 && ev.polarity != -1)
      throw ParseError("event " + std::to_string(index) + ": polarity must be +1 or -1");
    if (ev.x < 0 || ev.x >= width || ev.y < 0 || ev.y >= height)
      throw ParseError("event " + std::to_string(index) + ": coordinates out of range");
    if (ev.t < prev)
      throw ParseError("event " + std::to_string(index) + ": timestamps decrease");
    prev = ev.t;
    ++index;
  }
  for (std::size_t i = 1; i < cycle_syncs.size(); ++i)
    if (cycle_syncs[i] <= cycle_syncs[i - 1])
      throw ParseError("cycle syncs must be strictly increasing");
}

void sort_events(std::vector<Event>& events) {
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.y != b.y) return a.y < b.y;
    if (a.x != b.x) return a.x < b.x;
    return a.polarity < b.polarity;
  });
}

PixelThresholds::PixelThresholds(int width, int height)
    : width_(width), height_(height),
      hp_(static_cast<std::size_t>(width) * height, 0.0),
      hn_(static_cast<std::size_t>(width) * height, 0.0) {}

PixelThresholds PixelThresholds::uniform(int width, int height, double hp, double hn) {
  if (!(hp > 0.0) || !(hn < 0.0))
    throw ConfigError("uniform thresholds must satisfy hp > 0 > hn");
  PixelThresholds t(width, height);
  std::fill(t.hp_.begin(), t.hp_.end(), hp);
  std::fill(t.hn_.begin(), t.hn_.end(), hn);
  return t;
}

void PixelThresholds::set(int x, int y, double hp, double hn) {
  hp_[idx(x, y)] = hp;
  hn_[idx(x, y)] = hn;
}

bool PixelThresholds::is_valid(int x, int y) const {
  return hp_[idx(x, y)] > 0.0 && hn_[idx(x, y)] < 0.0;
}

void write_events_text(const std::string& path, const EventStream& stream) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "x,y,t_us,p\n";
  for (const Event& ev : stream.events)
    out << ev.x << ',' << ev.y << ',' << to_micros(ev.t) << ',' << ev.polarity << '\n';
  if (!out) throw ParseError("write failed on " + path);
  write_syncs(path, stream.cycle_syncs);
}

EventStream read_events_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != "x,y,t_us,p")
    throw ParseError(path + ":1: expected header \"x,y,t_us,p\"");

  EventStream stream;
  int max_x = -1, max_y = -1;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Event ev;
    long long us = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%lld,%d", &ev.x, &ev.y, &us, &ev.polarity) != 4)
      throw ParseError(path + ":" + std::to_string(lineno) + ": malformed event line");
    if (ev.polarity != 1 && ev.polarity != -1)
      throw ParseError(path + ":" + std::to_string(lineno) + ": polarity must be 1 or -1");
    if (ev.x < 0 || ev.y < 0)
      throw ParseError(path + ":" + std::to_string(lineno) + ": negative coordinates");
    ev.t = us * 1e-6;
    if (!stream.events.empty() && ev.t < stream.events.back().t)
      throw ParseError(path + ":" + std::to_string(lineno) + ": timestamps decrease");
    max_x = std::max(max_x, ev.x);
    max_y = std::max(max_y, ev.y);
    stream.events.push_back(ev);
  }
  stream.width = max_x + 1;
  stream.height = max_y + 1;
  stream.cycle_syncs = read_syncs(path);
  return stream;
}

void write_events_binary(const std::string& path, const EventStream& stream) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out.write(kBinaryMagic, 4);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(stream.width));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(stream.height));
  put_le<std::uint64_t>(out, stream.events.size());
  for (const Event& ev : stream.events) {
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(ev.x));
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(ev.y));
    out.put(static_cast<char>(static_cast<signed char>(ev.polarity)));
    out.put('\0');
    put_le<std::uint64_t>(out, to_nanos(ev.t));
  }
  if (!out) throw ParseError("write failed on " + path);
  write_syncs(path, stream.cycle_syncs);
}

EventStream read_events_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kBinaryMagic, 4) != 0)
    throw ParseError(path + ": bad magic, expected EVT1");

  EventStream stream;
  stream.width = static_cast<int>(get_le<std::uint32_t>(in));
  stream.height = static_cast<int>(get_le<std::uint32_t>(in));
  const std::uint64_t count = get_le<std::uint64_t>(in);
  stream.events.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Event ev;
    ev.x = get_le<std::uint16_t>(in);
    ev.y = get_le<std::uint16_t>(in);
    const signed char p = static_cast<signed char>(in.get());
    in.get();  // padding
    ev.polarity = p;
    ev.t = get_le<std::uint64_t>(in) * 1e-9;
    if (!in) throw ParseError(path + ": truncated at record " + std::to_string(i));
    if (ev.polarity != 1 && ev.polarity != -1)
      throw ParseError(path + ": record " + std::to_string(i) + ": bad polarity");
    if (ev.x >= stream.width || ev.y >= stream.height)
      throw ParseError(path + ": record " + std::to_string(i) + ": coordinates out of range");
    if (!stream.events.empty() && ev.t < stream.events.back().t)
      throw ParseError(path + ": record " + std::to_string(i) + ": timestamps decrease");
    stream.events.push_back(ev);
  }
  stream.cycle_syncs = read_syncs(path);
  return stream;
}

namespace {
bool has_binary_extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return false;
  const std::string ext = path.substr(dot);
  return ext == ".bin" || ext == ".evt";
}
}  // namespace

void write_events(const std::string& path, const EventStream& stream) {
  if (has_binary_extension(path))
    write_events_binary(path, stream);
  else
    write_events_text(path, stream);
}

EventStream read_events(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw ParseError("cannot read " + path);
  char magic[4] = {0, 0, 0, 0};
  probe.read(magic, 4);
  probe.close();
  if (std::memcmp(magic, kBinaryMagic, 4) == 0) return read_events_binary(path);
  return read_events_text(path);
}

void write_pfm(const std::string& path, const Image& image) {
  if (image.width < 1 || image.height < 1)
    throw ConfigError("image dimensions must be at least 1x1");
  if (image.channels != 1 && image.channels != 3)
    throw ConfigError("PFM supports 1 or 3 channels");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << (image.channels == 3 ? "PF" : "Pf") << "\n"
      << image.width << " " << image.height << "\n"
      << "-1.0\n";
  // Rows bottom to top; floats are already little-endian on this target.
  const std::size_t row_floats = static_cast<std::size_t>(image.width) * image.channels;
  for (int y = image.height - 1; y >= 0; --y) {
    const float* row = image.data.data() + static_cast<std::size_t>(y) * row_floats;
    out.write(reinterpret_cast<const char*>(row), row_floats * sizeof(float));
  }
  if (!out) throw ParseError("write failed on " + path);
}

Image read_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);

  std::string magic;
  in >> magic;
  int channels = 0;
  if (magic == "PF")
    channels = 3;
  else if (magic == "Pf")
    channels = 1;
  else
    throw ParseError(path + ": bad PFM magic");

  int width = 0, height = 0;
  double scale = 0.0;
  in >> width >> height >> scale;
  if (!in || width < 1 || height < 1)
    throw ParseError(path + ": bad PFM dimensions");
  if (scale == 0.0) throw ParseError(path + ": bad PFM scale");
  in.get();  // single whitespace after the scale

  Image image(width, height, channels);
  const std::size_t row_floats = static_cast<std::size_t>(width) * channels;
  std::vector<float> row(row_floats);
  for (int y = height - 1; y >= 0; --y) {
    in.read(reinterpret_cast<char*>(row.data()), row_floats * sizeof(float));
    if (!in) throw ParseError(path + ": truncated PFM payload");
    if (scale > 0.0) {
      // Big-endian payload: swap each float.
      for (float& f : row) {
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        bits = ((bits & 0xFF000000u) >> 24) | ((bits & 0x00FF0000u) >> 8) |
               ((bits & 0x0000FF00u) << 8) | ((bits & 0x000000FFu) << 24);
        std::memcpy(&f, &bits, 4);
      }
    }
    std::copy(row.begin(), row.end(),
              image.data.begin() + static_cast<std::size_t>(y) * row_floats);
  }
  return image;
}

void write_profile_csv(const std::string& path, const Profile& profile) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "time,value,valid\n";
  char buf[80];
  for (int i = 0; i < profile.samples(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%d\n", profile.sample_time(i),
                  profile.values[i], profile.valid[i] ? 1 : 0);
    out << buf;
  }
}

namespace {

struct ConfigParser {
  std::map<std::string, std::string> entries;
  std::string path;

  const std::string& get(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end())
      throw ConfigError(path + ": missing key " + key);
    used.push_back(key);
    return it->second;
  }

  double get_double(const std::string& key) {
    const std::string& s = get(key);
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw ParseError(path + ": key " + key + " has a malformed value \"" + s + "\"");
    }
    if (pos != s.size())
      throw ParseError(path + ": key " + key + " has a malformed value \"" + s + "\"");
    return v;
  }

  int get_int(const std::string& key) {
    const double v = get_double(key);
    const int i = static_cast<int>(std::llround(v));
    if (v != static_cast<double>(i))
      throw ParseError(path + ": key " + key + " must be an integer");
    return i;
  }

  std::uint64_t get_u64(const std::string& key) {
    const std::string& s = get(key);
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
      throw ParseError(path + ": key " + key + " must be an unsigned integer");
    return v;
  }

  void finish() {
    for (const auto& [key, value] : entries) {
      (void)value;
      if (std::find(used.begin(), used.end(), key) == used.end())
        throw ConfigError(path + ": unknown key " + key);
    }
  }

  std::vector<std::string> used;
};

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);

  ConfigParser parser;
  parser.path = path;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError(path + ":" + std::to_string(lineno) + ": empty key or value");
    if (!parser.entries.emplace(key, value).second)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key " + key);
  }

  RunConfig cfg;
  cfg.light_zenith = parser.get_double("light_zenith_rad");
  cfg.light_period = parser.get_double("light_period_s");
  cfg.light_phase0 = parser.get_double("light_phase0_rad");
  cfg.threshold_hp = parser.get_double("threshold_hp");
  cfg.threshold_hn = parser.get_double("threshold_hn");
  cfg.noise_sigma = parser.get_double("noise_sigma");
  cfg.logamp_floor = parser.get_double("logamp_floor");
  cfg.dead_time = parser.get_double("dead_time_s");
  cfg.rng_seed = parser.get_u64("rng_seed");
  cfg.solver_grid_azimuth = parser.get_int("solver_grid_azimuth");
  cfg.solver_grid_zenith = parser.get_int("solver_grid_zenith");
  cfg.solver_refine_iters = parser.get_int("solver_refine_iters");
  cfg.solver_refine_tol = parser.get_double("solver_refine_tol_rad");
  cfg.offset_light_ratio = parser.get_double("offset_light_ratio");
  cfg.mask_specular_margin = parser.get_double("mask_specular_margin");
  cfg.mask_cast_margin = parser.get_double("mask_cast_margin");
  cfg.mask_cost_threshold = parser.get_double("mask_cost_threshold");
  cfg.mask_peak_separation = parser.get_double("mask_peak_separation");
  cfg.cycles = parser.get_int("cycles");
  cfg.average_cycles = parser.get_int("average_cycles");
  parser.finish();
  return cfg;
}

void save_run_config(const std::string& path, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  char buf[64];
  const auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "light_zenith_rad = " << fmt(cfg.light_zenith) << "\n";
  out << "light_period_s = " << fmt(cfg.light_period) << "\n";
  out << "light_phase0_rad = " << fmt(cfg.light_phase0) << "\n";
  out << "threshold_hp = " << fmt(cfg.threshold_hp) << "\n";
  out << "threshold_hn = " << fmt(cfg.threshold_hn) << "\n";
  out << "noise_sigma = " << fmt(cfg.noise_sigma) << "\n";
  out << "logamp_floor = " << fmt(cfg.logamp_floor) << "\n";
  out << "dead_time_s = " << fmt(cfg.dead_time) << "\n";
  out << "rng_seed = " << cfg.rng_seed << "\n";
  out << "solver_grid_azimuth = " << cfg.solver_grid_azimuth << "\n";
  out << "solver_grid_zenith = " << cfg.solver_grid_zenith << "\n";
  out << "solver_refine_iters = " << cfg.solver_refine_iters << "\n";
  out << "solver_refine_tol_rad = " << fmt(cfg.solver_refine_tol) << "\n";
  out << "offset_light_ratio = " << fmt(cfg.offset_light_ratio) << "\n";
  out << "mask_specular_margin = " << fmt(cfg.mask_specular_margin) << "\n";
  out << "mask_cast_margin = " << fmt(cfg.mask_cast_margin) << "\n";
  out << "mask_cost_threshold = " << fmt(cfg.mask_cost_threshold) << "\n";
  out << "mask_peak_separation = " << fmt(cfg.mask_peak_separation) << "\n";
  out << "cycles = " << cfg.cycles << "\n";
  out << "average_cycles = " << cfg.average_cycles << "\n";
}

LightTrajectory RunConfig::make_trajectory() const {
  return LightTrajectory::circular(light_zenith, light_period, light_phase0);
}

SolverConfig RunConfig::make_solver_config() const {
  SolverConfig cfg;
  cfg.grid_azimuth = solver_grid_azimuth;
  cfg.grid_zenith = solver_grid_zenith;
  cfg.refine_iters = solver_refine_iters;
  cfg.refine_tol = solver_refine_tol;
  cfg.offset_ratio = offset_light_ratio;
  cfg.mask.specular_margin = mask_specular_margin;
  cfg.mask.cast_margin = mask_cast_margin;
  cfg.mask.cost_threshold = mask_cost_threshold;
  cfg.mask.peak_separation = mask_peak_separation;
  return cfg;
}

CircuitConfig RunConfig::make_circuit_config(int width, int height) const {
  CircuitConfig cfg;
  cfg.thresholds = PixelThresholds::uniform(width, height, threshold_hp, threshold_hn);
  cfg.noise_sigma = noise_sigma;
  cfg.logamp_floor = logamp_floor;
  cfg.dead_time = dead_time;
  cfg.rng_seed = rng_seed;
  return cfg;
}

void write_key_values(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  for (const auto& [key, value] : entries) out << key << " = " << value << "\n";
}

}  // namespace evps
