#include "core/serialize.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "json.hpp"

namespace rovernet {
namespace {

using nlohmann::json;

// 17 significant digits, enough for an exact double round-trip.
std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

std::string activation_name(Activation a) {
  return a == Activation::Sigmoid ? "sigmoid" : "linear";
}

Activation parse_activation(const std::string& name) {
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "linear") return Activation::Linear;
  throw ParseError("unknown activation name: " + name);
}

std::ifstream open_for_reading(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path + " for reading");
  }
  return in;
}

json parse_json(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

const json& require_key(const json& j, const char* key) {
  if (!j.is_object()) {
    throw ParseError("expected a JSON object");
  }
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string("missing key \"") + key + "\"");
  }
  return *it;
}

double as_number(const json& j, const char* what) {
  if (!j.is_number()) {
    throw ParseError(std::string(what) + " must be a number");
  }
  return j.get<double>();
}

void read_point(const json& j, const char* what, double& x, double& y) {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError(std::string(what) + " must be an [x, y] array");
  }
  x = as_number(j[0], what);
  y = as_number(j[1], what);
}

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return s.substr(begin, end - begin);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream row(line);
  while (std::getline(row, cell, ',')) {
    cells.push_back(trim(cell));
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line_number) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || cell.empty()) {
    throw ParseError("line " + std::to_string(line_number) +
                     ": expected a number, got \"" + cell + "\"");
  }
  return value;
}

}  // namespace

void save_network(const Network& net, std::ostream& out) {
  net.validate();
  out << "{\n  \"topology\": [";
  for (std::size_t i = 0; i < net.topology.layer_sizes.size(); ++i) {
    out << (i == 0 ? "" : ", ") << net.topology.layer_sizes[i];
  }
  out << "],\n  \"activations\": [\"" << activation_name(net.hidden_activation)
      << "\", \"" << activation_name(net.output_activation) << "\"],\n"
      << "  \"bias_input\": " << format_double(net.bias_input) << ",\n"
      << "  \"weights\": [\n";
  for (std::size_t m = 0; m < net.weights.size(); ++m) {
    const WeightMatrix& w = net.weights[m];
    out << "    [\n";
    for (std::size_t i = 0; i < w.rows(); ++i) {
      out << "      [";
      for (std::size_t j = 0; j < w.cols(); ++j) {
        out << (j == 0 ? "" : ", ") << format_double(w.at(i, j));
      }
      out << (i + 1 < w.rows() ? "],\n" : "]\n");
    }
    out << (m + 1 < net.weights.size() ? "    ],\n" : "    ]\n");
  }
  out << "  ]\n}\n";
  if (!out) {
    throw IoError("failed while writing network JSON");
  }
}

void save_network(const Network& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  save_network(net, out);
}

Network load_network(std::istream& in) {
  const json j = parse_json(in);

  const json& jt = require_key(j, "topology");
  if (!jt.is_array() || jt.size() < 2) {
    throw ParseError("\"topology\" must be an array of at least two sizes");
  }
  Network net;
  for (const json& entry : jt) {
    if (!entry.is_number_unsigned() || entry.get<std::uint64_t>() == 0) {
      throw ParseError("layer sizes must be positive integers");
    }
    net.topology.layer_sizes.push_back(entry.get<std::size_t>());
  }

  const json& ja = require_key(j, "activations");
  if (!ja.is_array() || ja.size() != 2 || !ja[0].is_string() ||
      !ja[1].is_string()) {
    throw ParseError("\"activations\" must be [hidden, output] names");
  }
  net.hidden_activation = parse_activation(ja[0].get<std::string>());
  net.output_activation = parse_activation(ja[1].get<std::string>());

  net.bias_input = as_number(require_key(j, "bias_input"), "\"bias_input\"");

  const json& jw = require_key(j, "weights");
  if (!jw.is_array()) {
    throw ParseError("\"weights\" must be an array of matrices");
  }
  for (const json& jm : jw) {
    if (!jm.is_array() || jm.empty()) {
      throw ParseError("each weight matrix must be a non-empty row array");
    }
    const std::size_t cols = jm[0].is_array() ? jm[0].size() : 0;
    if (cols < 2) {
      throw ParseError("each weight row needs a source weight and a bias");
    }
    WeightMatrix w(jm.size(), cols - 1);
    for (std::size_t i = 0; i < jm.size(); ++i) {
      const json& jrow = jm[i];
      if (!jrow.is_array() || jrow.size() != cols) {
        throw ParseError("weight rows must all have the same length");
      }
      for (std::size_t c = 0; c < cols; ++c) {
        w.at(i, c) = as_number(jrow[c], "weight");
      }
    }
    net.weights.push_back(std::move(w));
  }

  net.validate();
  return net;
}

Network load_network(const std::string& path) {
  std::ifstream in = open_for_reading(path);
  return load_network(in);
}

Dataset load_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;

  std::size_t n_inputs = 0;
  std::size_t n_outputs = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const std::vector<std::string> names = split_csv_line(line);
    for (const std::string& name : names) {
      const std::string expected =
          n_outputs == 0 ? "in" + std::to_string(n_inputs) : "";
      if (name == expected) {
        ++n_inputs;
      } else if (name == "out" + std::to_string(n_outputs)) {
        ++n_outputs;
      } else {
        throw ParseError("line " + std::to_string(line_number) +
                         ": unexpected column name \"" + name + "\"");
      }
    }
    break;
  }
  if (n_inputs == 0 || n_outputs == 0) {
    throw ParseError("header must list in0.. columns then out0.. columns");
  }

  Dataset data;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != n_inputs + n_outputs) {
      throw ParseError("line " + std::to_string(line_number) + ": expected " +
                       std::to_string(n_inputs + n_outputs) + " values, got " +
                       std::to_string(cells.size()));
    }
    Pattern p;
    for (std::size_t c = 0; c < n_inputs; ++c) {
      p.input.push_back(parse_cell(cells[c], line_number));
    }
    for (std::size_t c = n_inputs; c < cells.size(); ++c) {
      p.desired.push_back(parse_cell(cells[c], line_number));
    }
    data.patterns.push_back(std::move(p));
  }
  if (data.patterns.empty()) {
    throw ParseError("dataset has no patterns");
  }
  return data;
}

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in = open_for_reading(path);
  return load_dataset_csv(in);
}

World load_scenario(std::istream& in) {
  const json j = parse_json(in);
  World world;
  read_point(require_key(j, "start"), "\"start\"", world.start.x,
             world.start.y);
  read_point(require_key(j, "goal"), "\"goal\"", world.goal_x, world.goal_y);

  const json& jo = require_key(j, "obstacles");
  if (!jo.is_array()) {
    throw ParseError("\"obstacles\" must be an array");
  }
  for (const json& entry : jo) {
    Obstacle ob;
    read_point(require_key(entry, "c"), "obstacle \"c\"", ob.cx, ob.cy);
    ob.radius = as_number(require_key(entry, "r"), "obstacle \"r\"");
    world.obstacles.push_back(ob);
  }

  world.start.heading =
      bearing(world.start.x, world.start.y, world.goal_x, world.goal_y);
  return world;
}

World load_scenario(const std::string& path) {
  std::ifstream in = open_for_reading(path);
  return load_scenario(in);
}

SimConfig load_sim_config(std::istream& in, SimConfig base) {
  const json j = parse_json(in);
  if (!j.is_object()) {
    throw ParseError("simulation config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "dt") {
      base.dt = as_number(value, "\"dt\"");
    } else if (key == "wheelbase") {
      base.wheelbase = as_number(value, "\"wheelbase\"");
    } else if (key == "v_max") {
      base.v_max = as_number(value, "\"v_max\"");
    } else if (key == "k_goal") {
      base.k_goal = as_number(value, "\"k_goal\"");
    } else if (key == "sense_range") {
      base.sense_range = as_number(value, "\"sense_range\"");
    } else if (key == "sensor_angles") {
      double left = 0.0;
      double right = 0.0;
      read_point(value, "\"sensor_angles\"", left, right);
      base.sensor_angle_left = left;
      base.sensor_angle_right = right;
    } else if (key == "rover_radius") {
      base.rover_radius = as_number(value, "\"rover_radius\"");
    } else if (key == "goal_tolerance") {
      base.goal_tolerance = as_number(value, "\"goal_tolerance\"");
    } else if (key == "max_steps") {
      if (!value.is_number_unsigned()) {
        throw ParseError("\"max_steps\" must be a non-negative integer");
      }
      base.max_steps = value.get<std::size_t>();
    } else {
      throw ParseError("unknown simulation config key \"" + key + "\"");
    }
  }
  return base;
}

SimConfig load_sim_config(const std::string& path, SimConfig base) {
  std::ifstream in = open_for_reading(path);
  return load_sim_config(in, base);
}

}  // namespace rovernet
