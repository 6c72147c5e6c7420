#include "jewel/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace jewel {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("json: " + what + " at " + path);
}

const Json& member(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing field");
  return *it;
}

double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int int_at(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

Complex complex_at(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    fail(path, "expected a complex scalar [re, im]");
  return Complex(number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]"));
}

CMat cmat_at(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a matrix (array of rows)");
  const size_t rows = j.size();
  const Json& first = j[0];
  if (!first.is_array() || first.empty()) fail(path + "[0]", "expected a row");
  const size_t cols = first.size();
  CMat m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols)
      fail(rp, "ragged matrix row");
    for (size_t c = 0; c < cols; ++c)
      m(r, c) = complex_at(j[r][c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

Povm povm_at(const Json& j, const std::string& path) {
  const int dim = int_at(member(j, "dim", path), path + ".dim");
  const Json& effects = member(j, "effects", path);
  if (!effects.is_array() || effects.empty())
    fail(path + ".effects", "expected a nonempty array");
  std::vector<HMat> list;
  for (size_t i = 0; i < effects.size(); ++i) {
    const std::string ep = path + ".effects[" + std::to_string(i) + "]";
    const CMat m = cmat_at(effects[i], ep);
    if (m.rows() != dim || m.cols() != dim) fail(ep, "effect dimension mismatch");
    try {
      list.push_back(HMat::hermitize(m));
    } catch (const std::invalid_argument& e) {
      fail(ep, e.what());
    }
  }
  return Povm(dim, std::move(list));
}

void emit(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        emit(it.value(), out);
      }
      out += '}';
      return;
    }
    case Json::value_t::array: {
      out += '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        emit(j[i], out);
      }
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  emit(j, out);
  return out;
}

Json to_json(const CMat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const HMat& m) { return to_json(m.mat()); }

Json to_json(const Povm& p) {
  Json effects = Json::array();
  for (const HMat& e : p.effects()) effects.push_back(to_json(e));
  return Json{{"dim", p.dim()}, {"effects", std::move(effects)}};
}

Json to_json(const MeasurementSet& set) {
  Json povms = Json::array();
  for (const Povm& p : set.povms()) povms.push_back(to_json(p));
  return Json{{"dim", set.dim()}, {"povms", std::move(povms)}};
}

Json to_json(const FreeTuple& t) {
  Json mats = Json::array();
  for (const HMat& m : t.matrices) mats.push_back(to_json(m));
  return Json{{"dimD", t.dimD}, {"label", t.label}, {"matrices", std::move(mats)}};
}

Json to_json(const WitnessCandidate& w) {
  Json blocks = Json::array();
  for (const HMat& b : w.blocks) blocks.push_back(to_json(b));
  return Json{{"blocks", std::move(blocks)},
              {"n", w.n()},
              {"shape", w.shape.k()}};
}

Json to_json(const CompatVerdict& v, bool include_joint) {
  Json j{{"compatible", v.compatible},
         {"margin", v.margin},
         {"marginal_error", v.marginal_error}};
  if (include_joint && v.joint) j["joint"] = to_json(*v.joint);
  return j;
}

Json to_json(const BoundReport& r) {
  auto entry = [](const BoundEntry& e) {
    Json j{{"applicable", e.applicable}, {"value", e.value}};
    if (!e.note.empty()) j["note"] = e.note;
    return j;
  };
  std::vector<double> sym(r.symmetrization_point.data(),
                          r.symmetrization_point.data() +
                              r.symmetrization_point.size());
  return Json{{"g", r.g},
              {"d", r.d},
              {"k", r.k},
              {"lower",
               Json{{"cloning_symmetric", r.cloning_symmetric},
                    {"symmetrization_point", sym},
                    {"diamond_qc_symmetric", r.diamond_qc_symmetric}}},
              {"upper",
               Json{{"binary_qc", entry(r.binary_qc)},
                    {"mub_zhu", entry(r.mub_zhu)},
                    {"mub_designolle", entry(r.mub_designolle)},
                    {"planar_symmetric", entry(r.planar_symmetric)}}}};
}

Json to_json(const SdpProblem& p) {
  Json cons = Json::array();
  for (const SdpConstraint& c : p.constraints) {
    Json terms = Json::array();
    for (const SdpTerm& t : c.terms)
      terms.push_back(Json{{"block", t.block}, {"matrix", to_json(t.coeff)}});
    Json jc{{"rhs", c.rhs}, {"terms", std::move(terms)}};
    if (c.free_coeff != 0.0) jc["free_coeff"] = c.free_coeff;
    cons.push_back(std::move(jc));
  }
  Json obj = Json::array();
  for (size_t b = 0; b < p.objective.size(); ++b)
    if (p.objective[b].size())
      obj.push_back(Json{{"block", b}, {"matrix", to_json(p.objective[b])}});
  Json j{{"blocks", p.block_dims},
         {"constraints", std::move(cons)},
         {"objective", std::move(obj)},
         {"sense", p.sense == SdpSense::kMinimize ? "minimize" : "maximize"}};
  if (p.has_free_scalar) j["free_cost"] = p.free_cost;
  return j;
}

CMat cmat_from_json(const Json& j) { return cmat_at(j, "$"); }

HMat hmat_from_json(const Json& j) { return HMat::hermitize(cmat_at(j, "$")); }

Povm povm_from_json(const Json& j) { return povm_at(j, "$"); }

MeasurementSet set_from_json(const Json& j) {
  const int dim = int_at(member(j, "dim", "$"), "$.dim");
  const Json& povms = member(j, "povms", "$");
  if (!povms.is_array() || povms.empty())
    fail("$.povms", "expected a nonempty array");
  std::vector<Povm> list;
  for (size_t i = 0; i < povms.size(); ++i) {
    const std::string pp = "$.povms[" + std::to_string(i) + "]";
    Povm p = povm_at(povms[i], pp);
    if (p.dim() != dim) fail(pp, "POVM dimension differs from the set dimension");
    list.push_back(std::move(p));
  }
  return MeasurementSet(std::move(list));
}

FreeTuple tuple_from_json(const Json& j) {
  FreeTuple t;
  t.dimD = int_at(member(j, "dimD", "$"), "$.dimD");
  if (auto it = j.find("label"); it != j.end() && it->is_string())
    t.label = it->get<std::string>();
  const Json& mats = member(j, "matrices", "$");
  if (!mats.is_array()) fail("$.matrices", "expected an array");
  for (size_t i = 0; i < mats.size(); ++i) {
    const std::string mp = "$.matrices[" + std::to_string(i) + "]";
    const CMat m = cmat_at(mats[i], mp);
    if (m.rows() != t.dimD) fail(mp, "matrix does not match dimD");
    t.matrices.push_back(HMat::hermitize(m));
  }
  t.diagonal = true;
  for (const HMat& m : t.matrices) t.diagonal = t.diagonal && m.is_diagonal_real();
  return t;
}

WitnessCandidate witness_from_json(const Json& j) {
  const Json& shape_j = member(j, "shape", "$");
  if (!shape_j.is_array() || shape_j.empty())
    fail("$.shape", "expected a nonempty array");
  std::vector<int> shape;
  for (size_t i = 0; i < shape_j.size(); ++i)
    shape.push_back(int_at(shape_j[i], "$.shape[" + std::to_string(i) + "]"));
  const int n = int_at(member(j, "n", "$"), "$.n");
  const Json& blocks = member(j, "blocks", "$");
  if (!blocks.is_array()) fail("$.blocks", "expected an array");
  std::vector<HMat> list;
  for (size_t i = 0; i < blocks.size(); ++i) {
    const std::string bp = "$.blocks[" + std::to_string(i) + "]";
    const CMat m = cmat_at(blocks[i], bp);
    if (m.rows() != n) fail(bp, "block does not match n");
    list.push_back(HMat::hermitize(m));
  }
  try {
    return WitnessCandidate(JewelShape(std::move(shape)), std::move(list));
  } catch (const std::invalid_argument& e) {
    fail("$", e.what());
  }
}

SdpProblem sdp_problem_from_json(const Json& j) {
  SdpProblem p;
  const Json& blocks = member(j, "blocks", "$");
  if (!blocks.is_array()) fail("$.blocks", "expected an array");
  for (size_t i = 0; i < blocks.size(); ++i)
    p.add_block(int_at(blocks[i], "$.blocks[" + std::to_string(i) + "]"));
  const std::string sense =
      member(j, "sense", "$").get<std::string>();
  p.sense = sense == "maximize" ? SdpSense::kMaximize : SdpSense::kMinimize;
  if (auto it = j.find("free_cost"); it != j.end())
    p.enable_free_scalar(number_at(*it, "$.free_cost"));
  const Json& obj = member(j, "objective", "$");
  for (size_t i = 0; i < obj.size(); ++i) {
    const std::string op = "$.objective[" + std::to_string(i) + "]";
    p.add_objective(int_at(member(obj[i], "block", op), op + ".block"),
                    cmat_at(member(obj[i], "matrix", op), op + ".matrix"));
  }
  const Json& cons = member(j, "constraints", "$");
  for (size_t i = 0; i < cons.size(); ++i) {
    const std::string cp = "$.constraints[" + std::to_string(i) + "]";
    SdpConstraint c;
    c.rhs = number_at(member(cons[i], "rhs", cp), cp + ".rhs");
    if (auto it = cons[i].find("free_coeff"); it != cons[i].end())
      c.free_coeff = number_at(*it, cp + ".free_coeff");
    const Json& terms = member(cons[i], "terms", cp);
    for (size_t t = 0; t < terms.size(); ++t) {
      const std::string tp = cp + ".terms[" + std::to_string(t) + "]";
      SdpTerm term;
      term.block = int_at(member(terms[t], "block", tp), tp + ".block");
      term.coeff = cmat_at(member(terms[t], "matrix", tp), tp + ".matrix");
      c.terms.push_back(std::move(term));
    }
    p.add_constraint(std::move(c));
  }
  return p;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
}

void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text;
  if (!out) throw std::invalid_argument("write failed: " + path);
}

void dump_sdp_problem(const SdpProblem& p, const std::string& path) {
  save_text_file(path, canonical_dump(to_json(p)) + "\n");
}

}  // namespace jewel
