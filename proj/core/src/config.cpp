#include "freeprod/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace freeprod {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw DomainError("missing required field", path + "." + key);
  }
  return obj.at(key);
}

std::string require_string(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_string()) throw DomainError("expected a string", path + "." + key);
  return v.get<std::string>();
}

void check_id(const std::string& id, const std::string& path) {
  if (id.empty()) throw DomainError("empty id", path);
  for (char c : id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
      throw DomainError("id '" + id + "' may only contain [A-Za-z0-9_]", path);
    }
  }
  if (id == "eps") throw DomainError("'eps' is reserved", path);
}

std::shared_ptr<FactorSpace> build_factor(const json& cfg, const std::string& path) {
  const std::string type = require_string(cfg, "type", path);
  const bool markers = cfg.value("markers", true);

  if (type == "plane") {
    const json& bp = require(cfg, "basepoint", path);
    if (!bp.is_array() || bp.size() != 2) {
      throw DomainError("plane basepoint must be [x, y]", path + ".basepoint");
    }
    const json& net = require(cfg, "net", path);
    const int order = require(net, "rotation_order", path + ".net").get<int>();
    const std::string prefix = require_string(net, "prefix", path + ".net");
    check_id(prefix + "0", path + ".net.prefix");
    return std::make_shared<PlaneSpace>(
        PlanePoint{bp.at(0).get<double>(), bp.at(1).get<double>()}, order, prefix, markers);
  }

  if (type == "unit_graph" || type == "tree") {
    std::vector<std::string> vertices;
    for (const json& v : require(cfg, "vertices", path)) {
      check_id(v.get<std::string>(), path + ".vertices");
      vertices.push_back(v.get<std::string>());
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (const json& e : require(cfg, "edges", path)) {
      if (!e.is_array() || e.size() != 2) {
        throw DomainError("edge must be a [u, v] pair", path + ".edges");
      }
      edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    }
    const std::string basepoint = require_string(cfg, "basepoint", path);
    const json& net = require(cfg, "net", path);
    const std::string eps = require_string(net, "eps", path + ".net");
    const json& elements = require(net, "elements", path + ".net");
    std::map<std::string, std::string> images;
    for (auto it = elements.begin(); it != elements.end(); ++it) {
      check_id(it.key(), path + ".net.elements");
      images[it.key()] = it.value().get<std::string>();
    }
    if (images.count(eps) == 0) {
      throw DomainError("net eps '" + eps + "' missing from elements", path + ".net.eps");
    }
    try {
      return std::make_shared<UnitGraphSpace>(std::move(vertices), std::move(edges), basepoint,
                                              eps, images, type == "tree", markers);
    } catch (const DomainError& err) {
      throw DomainError(err.what(), path);
    }
  }

  throw DomainError("unknown factor type '" + type + "'", path + ".type");
}

FiniteGroup build_group(const json& cfg, const std::string& path) {
  FiniteGroup group;
  for (const json& e : require(cfg, "elements", path)) {
    check_id(e.get<std::string>(), path + ".elements");
    group.elements.push_back(e.get<std::string>());
  }
  const std::string identity = require_string(cfg, "identity", path);
  group.identity = -1;
  for (int i = 0; i < static_cast<int>(group.elements.size()); ++i) {
    if (group.elements[i] == identity) group.identity = i;
  }
  if (group.identity < 0) {
    throw DomainError("identity '" + identity + "' not among elements", path + ".identity");
  }
  auto index_of = [&](const std::string& id, const std::string& where) {
    for (int i = 0; i < static_cast<int>(group.elements.size()); ++i) {
      if (group.elements[i] == id) return i;
    }
    throw DomainError("unknown element '" + id + "'", where);
  };
  for (const json& row : require(cfg, "table", path)) {
    std::vector<int> out;
    for (const json& cell : row) {
      out.push_back(index_of(cell.get<std::string>(), path + ".table"));
    }
    group.table.push_back(std::move(out));
  }
  return group;
}

void attach_vertex_perms(FiniteGroup& group, const json& cfg, const UnitGraphSpace& graph,
                         const std::string& path) {
  const json& actions = require(cfg, "action", path);
  for (const std::string& elem : group.elements) {
    if (!actions.contains(elem)) {
      throw DomainError("missing action for element '" + elem + "'", path + ".action");
    }
    const json& mapping = actions.at(elem);
    std::vector<int> perm(graph.vertex_count(), -1);
    for (auto it = mapping.begin(); it != mapping.end(); ++it) {
      perm[graph.vertex_index(it.key())] = graph.vertex_index(it.value().get<std::string>());
    }
    for (int v = 0; v < graph.vertex_count(); ++v) {
      if (perm[v] < 0) {
        throw DomainError("action of '" + elem + "' misses vertex '" + graph.vertex_ids()[v] +
                              "'",
                          path + ".action");
      }
    }
    group.vertex_perm.push_back(std::move(perm));
  }
}

}  // namespace

LoadedSpace load_space_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("malformed JSON: ") + err.what());
  }

  const json& factors = require(doc, "factors", "");
  auto x = build_factor(require(factors, "X", ".factors"), ".factors.X");
  auto y = build_factor(require(factors, "Y", ".factors"), ".factors.Y");

  LoadedSpace loaded;
  loaded.space = std::make_shared<FpSpace>(x, y);

  if (doc.contains("groups")) {
    const json& groups = doc.at("groups");
    FiniteGroup g = build_group(require(groups, "G", ".groups"), ".groups.G");
    FiniteGroup h = build_group(require(groups, "H", ".groups"), ".groups.H");
    const auto* gx = dynamic_cast<const UnitGraphSpace*>(x.get());
    const auto* gy = dynamic_cast<const UnitGraphSpace*>(y.get());
    if (gx == nullptr || gy == nullptr) {
      throw CapabilityError("groups require graph factors");
    }
    attach_vertex_perms(g, groups.at("G"), *gx, ".groups.G");
    attach_vertex_perms(h, groups.at("H"), *gy, ".groups.H");
    loaded.action = std::make_shared<FreeProductAction>(loaded.space, std::move(g), std::move(h));
  }
  return loaded;
}

LoadedSpace load_space_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_space_config(buf.str());
}

}  // namespace freeprod
