/*
 Copyright 2026 The isingmppi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "isingmppi/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace imppi {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc{}) throw std::runtime_error("double formatting failed");
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end) throw IoError("not a number: '" + text + "'");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path.string());
  return is;
}

}  // namespace

void write_qubo(std::ostream& os, const QuboProblem& q) {
  if (!q.is_symmetrized()) throw std::invalid_argument("only symmetrized QUBOs can be written");
  const std::size_t d = q.dim();
  os << d << ' ' << q.horizon << ' ' << q.bits << ' ' << q.inputs << ' '
     << format_double(q.lambda_hint) << '\n';
  for (std::size_t i = 0; i < d; ++i) os << format_double(q.h(static_cast<Eigen::Index>(i))) << '\n';
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const double v = q.J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v != 0.0) os << i << ' ' << j << ' ' << format_double(v) << '\n';
    }
  }
}

QuboProblem read_qubo(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("QUBO file is empty");
  std::istringstream header(line);
  std::size_t d = 0;
  QuboProblem q;
  std::string lambda_text;
  if (!(header >> d >> q.horizon >> q.bits >> q.inputs >> lambda_text)) {
    throw IoError("malformed QUBO header: '" + line + "'");
  }
  q.lambda_hint = parse_double(lambda_text);
  q.h = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  q.J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    if (!std::getline(is, line)) throw IoError("QUBO file ends inside the bias block");
    q.h(static_cast<Eigen::Index>(i)) = parse_double(line);
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t i = 0, j = 0;
    std::string value;
    if (!(row >> i >> j >> value) || i >= j || j >= d) {
      throw IoError("malformed coupling line: '" + line + "'");
    }
    const double v = parse_double(value);
    q.J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    q.J(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
  }
  return q;
}

void write_qubo_file(const std::filesystem::path& path, const QuboProblem& q) {
  auto os = open_out(path);
  write_qubo(os, q);
  if (!os) throw IoError("write failed: " + path.string());
}

QuboProblem read_qubo_file(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_qubo(is);
}

void write_trajectory_csv(std::ostream& os, const ReferenceTrajectory& traj) {
  os << "idx,px,py,theta\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const State& s = traj.states[i];
    os << i << ',' << format_double(s.px) << ',' << format_double(s.py) << ','
       << format_double(s.theta) << '\n';
  }
}

ReferenceTrajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("idx,px,py,theta", 0) != 0) {
    throw IoError("trajectory CSV must start with 'idx,px,py,theta'");
  }
  std::vector<State> states;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field[4];
    for (auto& f : field) {
      if (!std::getline(row, f, ',')) throw IoError("short trajectory row: '" + line + "'");
    }
    if (static_cast<std::size_t>(parse_double(field[0])) != states.size()) {
      throw IoError("trajectory rows out of order at: '" + line + "'");
    }
    states.push_back({parse_double(field[1]), parse_double(field[2]), parse_double(field[3]), 0.0, 0.0});
  }
  if (states.empty()) throw IoError("trajectory CSV has no rows");
  double ds = 0.0;
  if (states.size() > 1) {
    double total = 0.0;
    for (std::size_t i = 1; i < states.size(); ++i) {
      total += std::hypot(states[i].px - states[i - 1].px, states[i].py - states[i - 1].py);
    }
    ds = total / static_cast<double>(states.size() - 1);
  }
  return trajectory_from_states(std::move(states), ds);
}

void write_trajectory_file(const std::filesystem::path& path, const ReferenceTrajectory& traj) {
  auto os = open_out(path);
  write_trajectory_csv(os, traj);
  if (!os) throw IoError("write failed: " + path.string());
}

ReferenceTrajectory read_trajectory_file(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_trajectory_csv(is);
}

}  // namespace imppi
