// Copyright 2026 The placetune Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "placetune/ilp/ilp_model.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <stdexcept>

namespace placetune::ilp {

using model::Instance;
using model::kNoIndex;
using model::kResourceKinds;

std::size_t IlpModel::row_count(RowKind kind) const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const Row& r) { return r.kind == kind; }));
}

std::size_t IlpModel::variable_index(std::size_t task, std::size_t impl, std::size_t hw) const {
  if (task >= taskImpls.size() || hw >= hwCount) return kNoIndex;
  const auto& impls = taskImpls[task];
  auto it = std::lower_bound(impls.begin(), impls.end(), impl);
  if (it == impls.end() || *it != impl) return kNoIndex;
  return taskBase[task] + static_cast<std::size_t>(it - impls.begin()) * hwCount + hw;
}

namespace {

class RowWriter {
 public:
  explicit RowWriter(IlpModel& m) : m_(m) {}

  void begin(RowKind kind, Sense sense, double rhs, std::size_t a, std::size_t b = 0, std::size_t c = 0) {
    row_ = Row{kind, sense, rhs, m_.columns.size(), 0, a, b, c};
  }
  void term(std::size_t var, double coef) {
    m_.columns.push_back(static_cast<std::uint32_t>(var));
    m_.coefficients.push_back(coef);
  }
  void end() {
    row_.end = m_.columns.size();
    m_.rows.push_back(row_);
  }
  void discard() {
    m_.columns.resize(row_.begin);
    m_.coefficients.resize(row_.begin);
  }

 private:
  IlpModel& m_;
  Row row_{};
};

}  // namespace

IlpModel build_ilp(const Instance& inst) {
  IlpModel m;
  const std::size_t H = inst.hw_count();
  const std::size_t T = inst.task_count();
  m.hwCount = H;
  m.taskBase.resize(T);
  m.taskImpls.resize(T);

  for (std::size_t t = 0; t < T; ++t) {
    auto impls = inst.task(t).compatible;
    std::sort(impls.begin(), impls.end());
    m.taskBase[t] = m.variables.size();
    for (std::size_t s : impls) {
      for (std::size_t h = 0; h < H; ++h) {
        m.variables.push_back({t, s, h});
        m.objective.push_back(model::from_milli(inst.energy(s, h)));
      }
    }
    m.taskImpls[t] = std::move(impls);
  }
  if (m.variables.size() > UINT32_MAX) throw std::length_error("ILP model exceeds 2^32 variables");

  RowWriter w(m);
  auto block = [&](std::size_t t, std::size_t rank) { return m.taskBase[t] + rank * H; };

  // Assignment / activity linking.
  for (std::size_t t = 0; t < T; ++t) {
    const auto& task = inst.task(t);
    w.begin(RowKind::assignment, Sense::eq, task.is_root() ? 1.0 : 0.0, t);
    for (std::size_t v = m.taskBase[t]; v < m.taskBase[t] + m.taskImpls[t].size() * H; ++v) w.term(v, 1.0);
    if (!task.is_root()) {
      const auto& parentImpls = m.taskImpls[task.parent];
      for (std::size_t rank = 0; rank < parentImpls.size(); ++rank) {
        const auto& links = inst.links(task.parent, parentImpls[rank]);
        bool demands = std::any_of(links.begin(), links.end(), [&](const auto& l) { return l.task == t; });
        if (!demands) continue;
        for (std::size_t h = 0; h < H; ++h) w.term(block(task.parent, rank) + h, -1.0);
      }
    }
    w.end();
  }

  // C1: utilization per (hardware, kind).
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t k = 0; k < kResourceKinds; ++k) {
      w.begin(RowKind::utilization, Sense::le, model::from_milli(inst.hw(h).cap[k]), h, k);
      bool any = false;
      for (std::size_t t = 0; t < T; ++t) {
        const auto& impls = m.taskImpls[t];
        for (std::size_t rank = 0; rank < impls.size(); ++rank) {
          model::Milli req = inst.impl(impls[rank]).req[k];
          if (req == 0) continue;
          w.term(block(t, rank) + h, model::from_milli(req));
          any = true;
        }
      }
      if (any) {
        w.end();
      } else {
        w.discard();
      }
    }
  }

  // C3: choosing (t, s, h) forces every child slot s requires to pick an
  // implementation within the bounds s imposes.
  std::vector<std::size_t> allowed;
  for (std::size_t t = 0; t < T; ++t) {
    const auto& impls = m.taskImpls[t];
    for (std::size_t rank = 0; rank < impls.size(); ++rank) {
      const std::size_t s = impls[rank];
      for (const auto& link : inst.links(t, s)) {
        const auto& bounds = inst.child_bounds(s, link);
        allowed.clear();
        const auto& childImpls = m.taskImpls[link.task];
        for (std::size_t cr = 0; cr < childImpls.size(); ++cr) {
          if (inst.satisfies(childImpls[cr], bounds)) allowed.push_back(cr);
        }
        for (std::size_t h = 0; h < H; ++h) {
          const std::size_t var = block(t, rank) + h;
          w.begin(RowKind::subrequirement, Sense::le, 0.0, t, var, link.task);
          w.term(var, 1.0);
          for (std::size_t cr : allowed) {
            for (std::size_t h2 = 0; h2 < H; ++h2) w.term(block(link.task, cr) + h2, -1.0);
          }
          w.end();
        }
      }
    }
  }
  return m;
}

IlpSize ilp_size(const Instance& inst) {
  IlpSize out;
  const std::uint64_t H = inst.hw_count();
  const std::size_t T = inst.task_count();
  std::vector<std::uint64_t> compat(T);
  for (std::size_t t = 0; t < T; ++t) compat[t] = inst.task(t).compatible.size();
  for (std::size_t t = 0; t < T; ++t) {
    const auto& task = inst.task(t);
    out.variables += compat[t] * H;
    ++out.rows;
    out.nonzeros += compat[t] * H;
    if (!task.is_root()) {
      for (std::size_t s : inst.task(task.parent).compatible) {
        const auto& links = inst.links(task.parent, s);
        if (std::any_of(links.begin(), links.end(), [&](const auto& l) { return l.task == t; })) out.nonzeros += H;
      }
    }
  }
  for (std::size_t k = 0; k < kResourceKinds; ++k) {
    std::uint64_t perHw = 0;
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t s : inst.task(t).compatible) {
        if (inst.impl(s).req[k] != 0) ++perHw;
      }
    }
    for (std::size_t h = 0; h < H; ++h) {
      if (perHw != 0) {
        ++out.rows;
        out.nonzeros += perHw;
      }
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s : inst.task(t).compatible) {
      for (const auto& link : inst.links(t, s)) {
        const auto& bounds = inst.child_bounds(s, link);
        std::uint64_t allowed = 0;
        for (std::size_t c : inst.task(link.task).compatible) {
          if (inst.satisfies(c, bounds)) ++allowed;
        }
        out.rows += H;
        out.nonzeros += H * (1 + allowed * H);
      }
    }
  }
  return out;
}

BuildResult build_ilp(const model::Scenario& scenario) {
  auto start = std::chrono::steady_clock::now();
  Instance inst(scenario);
  BuildResult out{build_ilp(inst), 0.0};
  out.generationSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

namespace {

void append_number(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

std::string var_name(const Variable& v) {
  return "x_" + std::to_string(v.task) + "_" + std::to_string(v.impl) + "_" + std::to_string(v.hw);
}

std::string row_name(const Row& r, std::size_t index) {
  switch (r.kind) {
    case RowKind::assignment: return "assign_t" + std::to_string(r.a);
    case RowKind::utilization: return "cap_h" + std::to_string(r.a) + "_" + std::string(model::to_string(model::kAllResourceKinds[r.b]));
    case RowKind::subrequirement: return "sub_" + std::to_string(index);
  }
  return "row_" + std::to_string(index);
}

constexpr std::size_t kLineWidth = 200;

class LineBuffer {
 public:
  explicit LineBuffer(std::string& out) : out_(out) {}
  void start(const std::string& head) {
    out_ += ' ';
    out_ += head;
    width_ = head.size() + 1;
  }
  void piece(const std::string& text) {
    if (width_ + text.size() + 1 > kLineWidth) {
      out_ += "\n   ";
      width_ = 3;
    }
    out_ += ' ';
    out_ += text;
    width_ += text.size() + 1;
  }
  void finish() { out_ += '\n'; }

 private:
  std::string& out_;
  std::size_t width_ = 0;
};

std::string signed_term(double coef, const std::string& var) {
  std::string s = coef < 0 ? "- " : "+ ";
  append_number(s, coef < 0 ? -coef : coef);
  s += ' ';
  s += var;
  return s;
}

}  // namespace

std::string to_lp_text(const IlpModel& m) {
  std::vector<std::string> names;
  names.reserve(m.variables.size());
  for (const auto& v : m.variables) names.push_back(var_name(v));

  std::string out;
  out += "\\ placetune binary program\n";
  out += "\\ variables: " + std::to_string(m.variable_count()) + ", rows: " + std::to_string(m.row_count()) + "\n";
  out += "Minimize\n";
  LineBuffer line(out);
  line.start("obj:");
  if (m.variables.empty()) line.piece("0");
  for (std::size_t v = 0; v < m.variables.size(); ++v) line.piece(signed_term(m.objective[v], names[v]));
  line.finish();

  out += "Subject To\n";
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const Row& r = m.rows[i];
    line.start(row_name(r, i) + ":");
    auto cols = m.row_columns(r);
    auto coefs = m.row_coefficients(r);
    if (cols.empty()) line.piece("0 " + (m.variables.empty() ? std::string("x_dummy") : names[0]));
    for (std::size_t k = 0; k < cols.size(); ++k) line.piece(signed_term(coefs[k], names[cols[k]]));
    std::string rhs = r.sense == Sense::eq ? "= " : "<= ";
    append_number(rhs, r.rhs);
    line.piece(rhs);
    line.finish();
  }

  out += "Binary\n";
  if (!m.variables.empty()) {
    line.start(names[0]);
    for (std::size_t v = 1; v < names.size(); ++v) line.piece(names[v]);
    line.finish();
  }
  out += "End\n";
  return out;
}

void export_lp(const IlpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot write LP file");
  out << to_lp_text(model);
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace placetune::ilp
