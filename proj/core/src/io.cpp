#include "heisfock/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace heisfock {

namespace {

std::string shortest(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace

nlohmann::json structure_to_json(const HeisenbergStructure& s) {
  nlohmann::json j;
  j["label"] = s.label();
  j["n"] = s.n();
  j["N"] = s.N();
  j["hormander"] = s.hormander_required();
  nlohmann::json omega = nlohmann::json::array();
  for (int i = 0; i < s.n(); ++i)
    for (int jj = 0; jj < s.n(); ++jj)
      for (int l = 0; l < s.N(); ++l) {
        const cplx v = s.omega_matrix(l)(i, jj);
        omega.push_back(nlohmann::json::array({v.real(), v.imag()}));
      }
  j["omega"] = std::move(omega);
  return j;
}

StructurePtr structure_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const int N = j.at("N").get<int>();
  const auto& omega = j.at("omega");
  if (static_cast<int>(omega.size()) != n * n * N)
    throw structural_error("omega array has wrong length");
  std::vector<Eigen::MatrixXcd> mats(N, Eigen::MatrixXcd::Zero(n, n));
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj)
      for (int l = 0; l < N; ++l) {
        const auto& pair = omega[idx++];
        mats[l](i, jj) = cplx(pair.at(0).get<double>(), pair.at(1).get<double>());
      }
  return std::make_shared<HeisenbergStructure>(
      n, N, std::move(mats), j.value("label", std::string("unnamed")),
      j.value("hormander", true));
}

nlohmann::json tensor_to_json(const GradedTensor& alpha) {
  nlohmann::json j;
  j["n"] = alpha.structure()->n();
  j["N"] = alpha.structure()->N();
  j["max_rank"] = alpha.max_rank();
  nlohmann::json ranks = nlohmann::json::array();
  for (int k = 0; k <= alpha.max_rank(); ++k) {
    nlohmann::json block = nlohmann::json::array();
    for (const cplx& v : alpha.rank(k))
      block.push_back(nlohmann::json::array({v.real(), v.imag()}));
    ranks.push_back(std::move(block));
  }
  j["ranks"] = std::move(ranks);
  return j;
}

GradedTensor tensor_from_json(StructurePtr s, const nlohmann::json& j) {
  if (j.at("n").get<int>() != s->n() || j.at("N").get<int>() != s->N())
    throw structural_error("tensor dimensions do not match the structure");
  GradedTensor alpha(std::move(s), j.at("max_rank").get<int>());
  const auto& ranks = j.at("ranks");
  for (int k = 0; k <= alpha.max_rank(); ++k) {
    const auto& block = ranks.at(k);
    auto dst = alpha.rank_mutable(k);
    if (block.size() != dst.size())
      throw structural_error("tensor rank block has wrong length");
    for (std::size_t i = 0; i < dst.size(); ++i)
      dst[i] = cplx(block[i].at(0).get<double>(), block[i].at(1).get<double>());
  }
  return alpha;
}

nlohmann::json bracket_to_json(const DistanceBracket& b) {
  nlohmann::json j;
  j["lower"] = b.lower;
  j["upper"] = b.upper;
  j["converged"] = b.converged;
  j["witness_nodes"] = b.witness.A.size();
  return j;
}

std::string path_to_csv(const HorizontalPath& p) {
  std::string out = "t";
  for (int i = 0; i < p.s->n(); ++i) {
    out += ",re_w" + std::to_string(i + 1);
    out += ",im_w" + std::to_string(i + 1);
  }
  for (int l = 0; l < p.s->N(); ++l) {
    out += ",re_c" + std::to_string(l + 1);
    out += ",im_c" + std::to_string(l + 1);
  }
  out += "\n";
  for (std::size_t row = 0; row < p.time.size(); ++row) {
    out += shortest(p.time[row]);
    for (int i = 0; i < p.s->n(); ++i) {
      out += "," + shortest(p.A[row][i].real());
      out += "," + shortest(p.A[row][i].imag());
    }
    for (int l = 0; l < p.s->N(); ++l) {
      out += "," + shortest(p.a[row][l].real());
      out += "," + shortest(p.a[row][l].imag());
    }
    out += "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << contents;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace heisfock
