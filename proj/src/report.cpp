#include <clickseg/report.hpp>

#include <cstdio>

namespace clickseg::report {

const std::vector<std::string>& field_names() {
  static const std::vector<std::string> names{
      "tp",  "tn",  "fp",  "fn",          "acc",        "jac",       "auroc",
      "kap", "fnr", "fpr", "auroc_grade", "kap_landis", "kap_fleiss"};
  return names;
}

namespace {

nlohmann::ordered_json optional_json(const auto& value) {
  if (value)
    return *value;
  return nullptr;
}

std::string number_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string csv_cell(const std::optional<double>& v) {
  return v ? number_text(*v) : std::string();
}

std::string csv_cell(const std::optional<std::string>& v) {
  if (!v)
    return {};
  std::string quoted = "\"";
  for (char ch : *v) {
    if (ch == '"')
      quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

std::string csv_row(const std::string& name, const EvalReport& r) {
  std::string row = csv_cell(std::optional<std::string>(name));
  for (double v : {r.cm.tp(), r.cm.tn(), r.cm.fp(), r.cm.fn(), r.acc})
    row += "," + number_text(v);
  for (const auto& v : {r.jac, r.auroc, r.kap, r.fnr, r.fpr})
    row += "," + csv_cell(v);
  for (const auto& v : {r.auroc_grade, r.kap_landis, r.kap_fleiss})
    row += "," + csv_cell(v);
  return row + "\n";
}

}  // namespace

nlohmann::ordered_json to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["tp"] = r.cm.tp();
  j["tn"] = r.cm.tn();
  j["fp"] = r.cm.fp();
  j["fn"] = r.cm.fn();
  j["acc"] = r.acc;
  j["jac"] = optional_json(r.jac);
  j["auroc"] = optional_json(r.auroc);
  j["kap"] = optional_json(r.kap);
  j["fnr"] = optional_json(r.fnr);
  j["fpr"] = optional_json(r.fpr);
  j["auroc_grade"] = optional_json(r.auroc_grade);
  j["kap_landis"] = optional_json(r.kap_landis);
  j["kap_fleiss"] = optional_json(r.kap_fleiss);
  return j;
}

nlohmann::ordered_json to_json(const SetReport& set,
                               const std::vector<std::string>& names) {
  nlohmann::ordered_json images = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < set.per_image.size(); ++i) {
    nlohmann::ordered_json entry;
    entry["image"] = i < names.size() ? names[i] : std::to_string(i);
    entry.update(to_json(set.per_image[i]));
    images.push_back(std::move(entry));
  }
  nlohmann::ordered_json doc;
  doc["images"] = std::move(images);
  doc["micro"] = to_json(set.micro);
  return doc;
}

std::string to_csv(const SetReport& set,
                   const std::vector<std::string>& names) {
  std::string out = "image";
  for (const auto& f : field_names())
    out += "," + f;
  out += "\n";
  for (std::size_t i = 0; i < set.per_image.size(); ++i)
    out += csv_row(i < names.size() ? names[i] : std::to_string(i),
                   set.per_image[i]);
  out += csv_row("micro", set.micro);
  return out;
}

}  // namespace clickseg::report
