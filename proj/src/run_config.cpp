#include "superliouville/run_config.hpp"

#include <fstream>
#include <numbers>
#include <set>

#include "superliouville/errors.hpp"
#include "superliouville/field_io.hpp"

namespace superliouville {

using nlohmann::json;

namespace {

// Closed JSON object: every key must be read exactly once before close().
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError((where.empty() ? std::string("config") : where) + ": " + what);
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) out = as_number(*v, at(key));
  }
  void positive(const std::string& key, double& out) {
    number(key, out);
    if (!(out > 0.0)) fail(at(key), "must be positive");
  }
  void optional_number(const std::string& key, std::optional<double>& out) {
    if (const json* v = get(key)) out = as_number(*v, at(key));
  }
  template <typename Int>
  void integer(const std::string& key, Int& out, long long lo) {
    if (const json* v = get(key)) {
      if (!v->is_number_integer()) fail(at(key), "expected an integer");
      const long long x = v->get<long long>();
      if (x < lo) fail(at(key), "must be at least " + std::to_string(lo));
      out = Int(x);
    }
  }
  void boolean(const std::string& key, bool& out) {
    if (const json* v = get(key)) {
      if (!v->is_boolean()) fail(at(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  bool string(const std::string& key, std::string& out) {
    if (const json* v = get(key)) {
      if (!v->is_string()) fail(at(key), "expected a string");
      out = v->get<std::string>();
      return true;
    }
    return false;
  }
  void vector(const std::string& key, Vector2& out) {
    if (const json* v = get(key)) out = as_vector(*v, at(key));
  }
  void spinor(const std::string& key, Spinor& out) {
    if (const json* v = get(key)) out = as_spinor(*v, at(key));
  }

  void close() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(at(it.key()), "unknown key");
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
  }
  static Vector2 as_vector(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) fail(where, "expected [x1, x2]");
    return Vector2(as_number(v[0], where), as_number(v[1], where));
  }
  static Complex as_complex(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) fail(where, "expected [re, im]");
    return Complex(as_number(v[0], where), as_number(v[1], where));
  }
  static Spinor as_spinor(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) fail(where, "expected [[re, im], [re, im]]");
    return Spinor(as_complex(v[0], where), as_complex(v[1], where));
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename F>
void section(Obj& parent, const std::string& key, F&& body) {
  if (const json* v = parent.get(key)) {
    Obj o(*v, parent.at(key));
    body(o);
    o.close();
  }
}

void read_params(Obj& o, BubbleParams& p) {
  o.vector("center", p.center);
  o.positive("scale", p.scale);
  if (const json* v = o.get("spin_direction")) {
    p.spin_direction = Obj::as_spinor(*v, o.at("spin_direction"));
    try {
      require_unit_spinor(*p.spin_direction);
    } catch (const Error& e) {
      Obj::fail(o.at("spin_direction"), e.what());
    }
  }
}

void require_family(const std::string& family, const std::string& where, bool allow_constant) {
  if (family == "constant" && allow_constant) return;
  if (!is_known_family(family)) Obj::fail(where, "unknown solution family '" + family + "'");
}

std::optional<RelativeGate> relative_gate(Obj& gates, const std::string& key) {
  std::optional<RelativeGate> out;
  section(gates, key, [&](Obj& o) {
    RelativeGate g;
    const json* t = o.get("target");
    if (!t) Obj::fail(o.at("target"), "required");
    g.target = Obj::as_number(*t, o.at("target"));
    o.positive("rel_tol", g.rel_tol);
    out = g;
  });
  return out;
}

}  // namespace

Classification classification_from_string(const std::string& name) {
  for (Classification c : {Classification::bounded, Classification::uniform_minus_infinity,
                           Classification::blowup_bounded_outside, Classification::blowup_minus_infinity_outside})
    if (to_string(c) == name) return c;
  throw ConfigError("unknown classification '" + name + "'");
}

MetricPreset RunConfig::metric_preset() const {
  if (metric) return *metric;
  return solution.family == "sphere_killing" ? MetricPreset::sphere : MetricPreset::flat;
}

RunConfig parse_run_config(const json& j) {
  RunConfig c;
  Obj root(j, "");

  section(root, "grid", [&](Obj& o) {
    o.positive("half_width", c.grid.half_width);
    o.integer("n", c.grid.n, 5);
    o.vector("center", c.grid.center);
  });

  std::string metric;
  if (root.string("metric", metric)) c.metric = metric_preset_from_string(metric);

  bool has_spin = false;
  section(root, "solution", [&](Obj& o) {
    o.string("family", c.solution.family);
    require_family(c.solution.family, o.at("family"), true);
    read_params(o, c.solution.params);
    has_spin = c.solution.params.spin_direction.has_value();
    o.boolean("wrong_sign", c.solution.wrong_sign);
    o.number("noise", c.solution.noise);
    if (c.solution.noise < 0.0) Obj::fail(o.at("noise"), "must be nonnegative");
    o.integer("seed", c.solution.seed, 0);
    o.number("u0", c.solution.u0);
    o.spinor("psi0", c.solution.psi0);
  });
  if (!has_spin && c.solution.family != "scalar_bubble") c.solution.params.spin_direction = Spinor(1, 0);
  if (c.metric && c.solution.family != "constant") {
    const MetricPreset natural = c.solution.family == "sphere_killing" ? MetricPreset::sphere : MetricPreset::flat;
    if (*c.metric != natural) Obj::fail("metric", "does not match the solution family");
  }

  section(root, "solver", [&](Obj& o) {
    o.number("tol_residual", c.solver.tol_residual);
    o.integer("max_iters", c.solver.max_iters, 1);
    std::string s;
    if (o.string("damping", s)) c.solver.damping = damping_from_string(s);
    o.integer("max_halvings", c.solver.max_halvings, 0);
    o.number("linear_tol", c.solver.linear_tol);
    if (o.string("gauge", s)) c.solver.gauge = gauge_from_string(s);
    o.integer("gmres_restart", c.solver.gmres_restart, 1);
    o.integer("gmres_max_iters", c.solver.gmres_max_iters, 1);
    std::optional<double> radius;
    o.optional_number("mass_monitor_radius", radius);
    if (radius && !(*radius > 0.0)) Obj::fail(o.at("mass_monitor_radius"), "must be positive");
    c.solver.mass_monitor_radius = radius;
  });
  c.solver.validate();

  section(root, "diagnostics", [&](Obj& o) {
    std::string s;
    if (o.string("tail", s)) c.diagnostics.tail = tail_from_string(s);
    if (const json* v = o.get("annulus")) {
      const Vector2 a = Obj::as_vector(*v, o.at("annulus"));
      if (!(a.x() > 0.0 && a.y() > a.x())) Obj::fail(o.at("annulus"), "needs 0 < r1 < r2");
      c.diagnostics.annulus = Annulus{a.x(), a.y()};
    }
    o.boolean("stress", c.diagnostics.stress);
    o.boolean("green", c.diagnostics.green);
  });

  section(root, "gates", [&](Obj& o) {
    o.optional_number("residual_max", c.gates.residual_max);
    o.optional_number("T_max", c.gates.T_max);
    o.optional_number("holomorphy_max", c.gates.holomorphy_max);
    c.gates.alpha = relative_gate(o, "alpha");
    c.gates.I = relative_gate(o, "I");
    c.gates.u_slope = relative_gate(o, "u_slope");
    c.gates.xi0_norm = relative_gate(o, "xi0_norm");
    o.optional_number("green_match", c.gates.green_match);
    if (const json* v = o.get("blowup_points")) {
      if (!v->is_number_integer() || v->get<long long>() < 0) Obj::fail(o.at("blowup_points"), "expected a count");
      c.gates.blowup_points = v->get<int>();
    }
    std::string s;
    if (o.string("blowup_classification", s)) c.gates.blowup_classification = classification_from_string(s);
    o.number("mass_tol", c.gates.mass_tol);
  });

  section(root, "sequence", [&](Obj& o) {
    o.string("family", c.sequence.family);
    require_family(c.sequence.family, o.at("family"), false);
    read_params(o, c.sequence.base);
    o.positive("scale_ratio", c.sequence.scale_ratio);
    o.vector("center_step", c.sequence.center_step);
    o.integer("count", c.sequence.count, 2);
    section(o, "grid", [&](Obj& g) {
      GridConfig gc{1.0, 513, Vector2::Zero()};
      g.positive("half_width", gc.half_width);
      g.integer("n", gc.n, 5);
      g.vector("center", gc.center);
      c.sequence.domain = gc.grid();
    });
  });
  if (c.sequence.family == "spinor_bubble" && !c.sequence.base.spin_direction) {
    c.sequence.base.spin_direction = Spinor(1, 0);
  }

  section(root, "detection", [&](Obj& o) {
    o.number("epsilon0", c.detection.epsilon0);
    o.positive("delta", c.detection.delta);
    o.integer("window", c.detection.window, 2);
    o.number("floor", c.detection.floor);
    o.number("min_decrement", c.detection.min_decrement);
    o.positive("psi_growth", c.detection.psi_growth);
    o.integer("max_points", c.detection.max_points, 1);
  });
  if (!(c.detection.epsilon0 > 0.0 && c.detection.epsilon0 < std::numbers::pi)) {
    throw InvalidThreshold("detection.epsilon0 must lie in (0, pi)");
  }

  section(root, "export", [&](Obj& o) {
    if (const json* v = o.get("fields")) {
      if (!v->is_array() || v->empty()) Obj::fail(o.at("fields"), "expected a nonempty list of field names");
      c.export_fields.fields.clear();
      for (const auto& f : *v) {
        if (!f.is_string()) Obj::fail(o.at("fields"), "field names are strings");
        const std::string name = f.get<std::string>();
        const auto& known = export_field_names();
        if (std::find(known.begin(), known.end(), name) == known.end()) {
          Obj::fail(o.at("fields"), "unknown field name '" + name + "'");
        }
        c.export_fields.fields.push_back(name);
      }
    }
  });

  section(root, "kelvin", [&](Obj& o) {
    std::string s;
    if (o.string("law", s)) c.kelvin.law = kelvin_law_from_string(s);
    o.positive("r_min", c.kelvin.r_min);
    o.boolean("allow_puncture", c.kelvin.allow_puncture);
    section(o, "target", [&](Obj& g) {
      GridConfig gc;
      g.positive("half_width", gc.half_width);
      g.integer("n", gc.n, 5);
      g.vector("center", gc.center);
      c.kelvin.target = gc.grid();
    });
  });

  root.close();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

}  // namespace superliouville
