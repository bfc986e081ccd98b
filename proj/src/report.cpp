#include "sugar/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace sugar {
namespace {

std::string num(Scalar v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json vec(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

Json to_json(const KsResult& ks) { return Json{{"statistic", ks.statistic}, {"p_value", ks.p_value}, {"n", ks.n}}; }

Json to_json(const ClassificationReport& r) {
  Json confusion = Json::array();
  for (Index i = 0; i < r.confusion.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < r.confusion.cols(); ++j) row.push_back(r.confusion(i, j));
    confusion.push_back(row);
  }
  return Json{{"acp", r.acp}, {"acr", r.acr}, {"precision", vec(r.precision)}, {"recall", vec(r.recall)},
              {"confusion", confusion}};
}

Json to_json(const IterationRecord& r) {
  Json j{{"iteration", r.iteration},
         {"input_rows", r.input_rows},
         {"generated", r.generated},
         {"max_level", r.max_level},
         {"degree_variance_before", r.degree_variance_before},
         {"degree_variance_after", r.degree_variance_after}};
  j["ks"] = r.ks ? to_json(*r.ks) : Json(nullptr);
  return j;
}

Json to_json(const ClassifyOutcome& r) {
  return Json{{"acp_orig", r.original.acp},  {"acr_orig", r.original.acr}, {"acp_smote", r.smote.acp},
              {"acr_smote", r.smote.acr},    {"acp_sugar", r.sugar.acp},   {"acr_sugar", r.sugar.acr},
              {"smote_generated", r.smote_generated}, {"sugar_generated", r.sugar_generated},
              {"original", to_json(r.original)}, {"smote", to_json(r.smote)}, {"sugar", to_json(r.sugar)}};
}

Json to_json(const ClusterOutcome& r) {
  return Json{{"ri_orig", r.ri_original},
              {"ri_sugar", r.ri_sugar},
              {"components_orig", r.components_original},
              {"components_sugar", r.components_sugar},
              {"generated", r.generated}};
}

std::string history_csv(const std::vector<IterationRecord>& history) {
  std::ostringstream os;
  os << "iteration,input_rows,generated,max_level,degree_variance_before,degree_variance_after,ks_statistic,ks_p_value\n";
  for (const auto& r : history) {
    os << r.iteration << ',' << r.input_rows << ',' << r.generated << ',' << r.max_level << ','
       << num(r.degree_variance_before) << ',' << num(r.degree_variance_after) << ',';
    if (r.ks) os << num(r.ks->statistic) << ',' << num(r.ks->p_value);
    else os << ',';
    os << '\n';
  }
  return os.str();
}

std::string classification_csv(const ClassifyOutcome& r) {
  std::ostringstream os;
  os << "method,class,precision,recall\n";
  const std::pair<const char*, const ClassificationReport*> methods[] = {
      {"orig", &r.original}, {"smote", &r.smote}, {"sugar", &r.sugar}};
  for (const auto& [name, rep] : methods) {
    for (Index c = 0; c < rep->precision.size(); ++c) {
      os << name << ',' << c << ',' << num(rep->precision(c)) << ',' << num(rep->recall(c)) << '\n';
    }
    os << name << ",all," << num(rep->acp) << ',' << num(rep->acr) << '\n';
  }
  return os.str();
}

std::string metrics_csv(const std::vector<std::pair<std::string, Scalar>>& metrics) {
  std::ostringstream os;
  os << "metric,value\n";
  for (const auto& [name, value] : metrics) os << name << ',' << num(value) << '\n';
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace sugar
