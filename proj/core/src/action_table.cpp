#include "hopflab/actions.hpp"

#include <json.hpp>

#include <string_view>

namespace hopflab::actions {

namespace detail {
extern const std::string_view kActionTableJson;
}

namespace {

struct TableRow {
  std::string label;
  int curvature_sign = 0;
  std::string description;
  std::vector<CMat3> generators;
  CMat3 section_frame;
};

struct Table {
  int version = 0;
  std::vector<TableRow> rows;
};

CMat3 read_matrix(const nlohmann::json& node) {
  CMat3 m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m(i, j) = cplx(node.at("re").at(i).at(j).get<double>(), node.at("im").at(i).at(j).get<double>());
    }
  }
  return m;
}

Table parse_table() {
  const nlohmann::json doc = nlohmann::json::parse(detail::kActionTableJson);
  Table table;
  table.version = doc.at("schema_version").get<int>();
  for (const auto& entry : doc.at("actions")) {
    TableRow row;
    row.label = entry.at("label").get<std::string>();
    row.curvature_sign = entry.at("curvature_sign").get<int>();
    row.description = entry.value("description", "");
    for (const auto& g : entry.at("generators")) row.generators.push_back(read_matrix(g));
    row.section_frame = read_matrix(entry.at("section_frame"));
    table.rows.push_back(std::move(row));
  }
  return table;
}

const Table& table() {
  static const Table instance = parse_table();
  return instance;
}

}  // namespace

int action_table_version() { return table().version; }

PolarActionSpec polar_action(ActionLabel label, double c) {
  const std::string_view name = label_name(label);
  for (const TableRow& row : table().rows) {
    if (row.label != name) continue;
    if ((row.curvature_sign > 0) != (c > 0)) {
      throw Error(ErrorKind::InvalidArgument,
                  std::string("action ") + row.label + " requires curvature of sign " +
                      (row.curvature_sign > 0 ? "+" : "-"));
    }
    ambient::SpaceForm space(c);
    const CMat3 h = space.form_matrix();
    for (const CMat3& g : row.generators) {
      if ((g.adjoint() * h + h * g).cwiseAbs().maxCoeff() > 1e-12) {
        throw Error(ErrorKind::InvalidArgument, "generator table entry is not an infinitesimal isometry");
      }
    }
    return PolarActionSpec{label, space, row.generators, ambient::SectionChart(space, row.section_frame),
                           row.description};
  }
  throw Error(ErrorKind::InvalidArgument, "action label missing from the generator table");
}

PolarActionSpec polar_action(ActionLabel label) { return polar_action(label, default_curvature(label)); }

}  // namespace hopflab::actions
