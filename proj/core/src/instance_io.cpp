#include "dmabo/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dmabo/error.hpp"

namespace dmabo {
namespace {

using nlohmann::json;

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json matrix_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) rows.push_back(vector_json(M.row(r).transpose()));
  return {{"rows", M.rows()}, {"cols", M.cols()}, {"data", rows}};
}

Eigen::MatrixXd matrix_from(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const json& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows) throw InstanceError("affine row count mismatch");
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = vector_from(data[static_cast<std::size_t>(r)]);
    if (row.size() != cols) throw InstanceError("affine column count mismatch");
    M.row(r) = row.transpose();
  }
  return M;
}

}  // namespace

std::string instance_to_json(const ProblemInstance& problem) {
  json agents = json::array();
  for (const AgentProblem& a : problem.agents) {
    json grid = json::array();
    for (const Point& x : a.grid) grid.push_back(vector_json(x));
    agents.push_back({
        {"grid", grid},
        {"objective", a.objective},
        {"constraints", a.constraints},
        {"affine", matrix_json(a.affine)},
        {"norm_bounds", a.norm_bounds},
        {"kernel",
         {{"family", to_string(a.kernel.family)},
          {"lengthscales", a.kernel.lengthscales},
          {"output_scale", a.kernel.output_scale}}},
    });
  }
  json doc = {
      {"kind", problem.kind},
      {"num_constraints", problem.num_constraints},
      {"b", vector_json(problem.b)},
      {"noise_sigma", problem.noise_sigma},
      {"xi", problem.xi},
      {"tilde_rho", problem.tilde_rho},
      {"metadata", problem.metadata},
      {"agents", agents},
  };
  if (problem.reference) {
    json ref = {{"indices", problem.reference->indices}, {"f_star", problem.reference->f_star}};
    if (problem.reference->xi) ref["xi"] = *problem.reference->xi;
    doc["reference"] = ref;
  }
  return doc.dump(1) + "\n";
}

ProblemInstance instance_from_json(std::string_view text) {
  ProblemInstance problem;
  try {
    const json doc = json::parse(text);
    problem.kind = doc.at("kind").get<std::string>();
    problem.num_constraints = doc.at("num_constraints").get<int>();
    problem.b = vector_from(doc.at("b"));
    problem.noise_sigma = doc.at("noise_sigma").get<double>();
    problem.xi = doc.at("xi").get<double>();
    problem.tilde_rho = doc.at("tilde_rho").get<double>();
    problem.metadata = doc.value("metadata", json::object())
                           .get<std::map<std::string, std::vector<double>>>();
    for (const json& ja : doc.at("agents")) {
      AgentProblem a;
      for (const json& x : ja.at("grid")) a.grid.push_back(vector_from(x));
      a.objective = ja.at("objective").get<std::vector<double>>();
      a.constraints = ja.at("constraints").get<std::vector<std::vector<double>>>();
      a.affine = matrix_from(ja.at("affine"));
      a.norm_bounds = ja.at("norm_bounds").get<std::vector<double>>();
      const json& jk = ja.at("kernel");
      a.kernel.family = kernel_family_from_string(jk.at("family").get<std::string>());
      a.kernel.lengthscales = jk.at("lengthscales").get<std::vector<double>>();
      a.kernel.output_scale = jk.at("output_scale").get<double>();
      problem.agents.push_back(std::move(a));
    }
    if (doc.contains("reference")) {
      const json& jr = doc.at("reference");
      ReferenceSolution ref;
      ref.indices = jr.at("indices").get<std::vector<std::size_t>>();
      ref.f_star = jr.at("f_star").get<double>();
      if (jr.contains("xi")) ref.xi = jr.at("xi").get<double>();
      problem.reference = ref;
    }
  } catch (const json::exception& e) {
    throw InstanceError(std::string("malformed instance file: ") + e.what());
  } catch (const InputError& e) {
    throw InstanceError(std::string("malformed instance file: ") + e.what());
  }
  problem.validate();
  return problem;
}

void save_instance(const std::filesystem::path& path, const ProblemInstance& problem) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << instance_to_json(problem);
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

}  // namespace dmabo
