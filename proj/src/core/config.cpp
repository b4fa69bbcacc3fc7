// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include "json.hpp"

namespace fsusc
{

using json = nlohmann::json;

namespace
{

[[noreturn]] void fail(const std::string &key, const std::string &what)
{
  throw Error(ErrorCode::Config, key + ": " + what);
}

void check_keys(const json &obj, const std::string &path, std::initializer_list<const char *> allowed)
{
  if (!obj.is_object())
    fail(path, "expected an object");
  for (const auto &[key, value] : obj.items())
  {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char *a) { return key == a; }))
      fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

std::string join(const std::string &path, const char *key)
{
  return path.empty() ? std::string(key) : path + "." + key;
}

double get_number(const json &obj, const std::string &path, const char *key)
{
  const auto name = join(path, key);
  if (!obj.contains(key))
    fail(name, "missing required key");
  const json &v = obj.at(key);
  if (!v.is_number())
    fail(name, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d))
    fail(name, "expected a finite number");
  return d;
}

long get_integer(const json &obj, const std::string &path, const char *key)
{
  const auto name = join(path, key);
  if (!obj.contains(key))
    fail(name, "missing required key");
  const json &v = obj.at(key);
  if (!v.is_number_integer())
    fail(name, "expected an integer");
  return v.get<long>();
}

Vec3d get_vec3(const json &obj, const std::string &path, const char *key)
{
  const auto name = join(path, key);
  const json &v = obj.at(key);
  if (!v.is_array() || v.size() != 3)
    fail(name, "expected an array of 3 numbers");
  Vec3d out;
  for (int a = 0; a < 3; ++a)
  {
    if (!v[static_cast<std::size_t>(a)].is_number())
      fail(name, "expected an array of 3 numbers");
    out[a] = v[static_cast<std::size_t>(a)].get<double>();
    if (!std::isfinite(out[a]))
      fail(name, "expected finite numbers");
  }
  return out;
}

std::string get_string(const json &obj, const std::string &path, const char *key)
{
  const json &v = obj.at(key);
  if (!v.is_string())
    fail(join(path, key), "expected a string");
  return v.get<std::string>();
}

Vec3d unit(const Vec3d &v, const std::string &name)
{
  const double n = norm(v);
  if (!(n > 0.0))
    fail(name, "must be a nonzero vector");
  return normalized(v);
}

MeshConfig parse_mesh(const json &j)
{
  check_keys(j, "mesh", {"dims", "h", "shape"});
  MeshConfig m;
  if (!j.contains("dims"))
    fail("mesh.dims", "missing required key");
  const json &d = j.at("dims");
  if (!d.is_array() || d.size() != 3)
    fail("mesh.dims", "expected an array of 3 positive integers");
  int dims[3];
  for (std::size_t a = 0; a < 3; ++a)
  {
    if (!d[a].is_number_integer() || d[a].get<long>() < 1 || d[a].get<long>() > 4096)
      fail("mesh.dims", "expected an array of 3 positive integers");
    dims[a] = d[a].get<int>();
  }
  m.dims = {dims[0], dims[1], dims[2]};
  m.h = get_number(j, "mesh", "h");
  if (!(m.h > 0.0))
    fail("mesh.h", "must be > 0");
  if (j.contains("shape"))
  {
    const json &s = j.at("shape");
    check_keys(s, "mesh.shape", {"kind", "radius"});
    if (!s.contains("kind"))
      fail("mesh.shape.kind", "missing required key");
    const std::string kind = get_string(s, "mesh.shape", "kind");
    if (kind == "box")
    {
      m.shape.kind = ShapeKind::Box;
      if (s.contains("radius"))
        fail("mesh.shape.radius", "not used by a box");
    }
    else if (kind == "cylinder_z")
    {
      m.shape.kind = ShapeKind::CylinderZ;
      m.shape.radius = get_number(s, "mesh.shape", "radius");
      if (!(m.shape.radius > 0.0))
        fail("mesh.shape.radius", "must be > 0");
    }
    else
      fail("mesh.shape.kind", "expected \"box\" or \"cylinder_z\"");
  }
  return m;
}

MaterialConfig parse_material(const json &j)
{
  check_keys(j, "material", {"A", "K", "alpha", "u", "ell", "anisotropy_form"});
  MaterialConfig m;
  m.A = get_number(j, "material", "A");
  if (m.A < 0.0)
    fail("material.A", "must be >= 0");
  m.K = get_number(j, "material", "K");
  if (m.K < 0.0)
    fail("material.K", "must be >= 0");
  m.alpha = get_number(j, "material", "alpha");
  if (!(m.alpha > 0.0))
    fail("material.alpha", "must be > 0");
  if (j.contains("u"))
    m.u = unit(get_vec3(j, "material", "u"), "material.u");
  if (j.contains("ell"))
    m.ell = get_vec3(j, "material", "ell");
  if (j.contains("anisotropy_form"))
  {
    const std::string f = get_string(j, "material", "anisotropy_form");
    if (f == "printed")
      m.anisotropy_form = AnisotropyForm::Printed;
    else if (f == "easy_axis")
      m.anisotropy_form = AnisotropyForm::EasyAxis;
    else
      fail("material.anisotropy_form", "expected \"printed\" or \"easy_axis\"");
  }
  return m;
}

EquilibriumConfig parse_equilibrium(const json &j)
{
  check_keys(j, "equilibrium", {"m0", "tol_eq", "max_steps"});
  EquilibriumConfig e;
  if (j.contains("m0"))
    e.m0 = unit(get_vec3(j, "equilibrium", "m0"), "equilibrium.m0");
  if (j.contains("tol_eq"))
  {
    e.tol_eq = get_number(j, "equilibrium", "tol_eq");
    if (!(e.tol_eq > 0.0))
      fail("equilibrium.tol_eq", "must be > 0");
  }
  if (j.contains("max_steps"))
  {
    e.max_steps = get_integer(j, "equilibrium", "max_steps");
    if (e.max_steps < 1)
      fail("equilibrium.max_steps", "must be >= 1");
  }
  return e;
}

SweepConfig parse_sweep(const json &j)
{
  check_keys(j, "sweep",
             {"omega_min", "omega_max", "count", "omegas", "directions", "tol", "max_iter",
              "precond", "workers", "chi_scale", "band_alpha"});
  SweepConfig s;
  if (j.contains("omega_min"))
  {
    s.omega_min = get_number(j, "sweep", "omega_min");
    if (!(*s.omega_min > 0.0))
      fail("sweep.omega_min", "must be > 0");
  }
  if (j.contains("omega_max"))
  {
    s.omega_max = get_number(j, "sweep", "omega_max");
    if (!(*s.omega_max > 0.0))
      fail("sweep.omega_max", "must be > 0");
  }
  if (j.contains("count"))
  {
    const long c = get_integer(j, "sweep", "count");
    if (c < 1 || c > 100000)
      fail("sweep.count", "must be in [1, 100000]");
    s.count = static_cast<int>(c);
  }
  if (j.contains("omegas"))
  {
    const json &o = j.at("omegas");
    if (!o.is_array())
      fail("sweep.omegas", "expected an array of numbers");
    if (o.empty())
      fail("sweep.omegas", "frequency list is empty");
    std::vector<double> w;
    for (const auto &v : o)
    {
      if (!v.is_number() || !(v.get<double>() > 0.0) || !std::isfinite(v.get<double>()))
        fail("sweep.omegas", "entries must be finite numbers > 0");
      w.push_back(v.get<double>());
    }
    std::sort(w.begin(), w.end(), std::greater<>());
    if (std::adjacent_find(w.begin(), w.end()) != w.end())
      fail("sweep.omegas", "duplicate frequency");
    s.omegas = std::move(w);
  }
  else
  {
    if (!s.omega_min || !s.omega_max)
      fail("sweep", "omega_min and omega_max are required without omegas");
    if (*s.omega_min > *s.omega_max)
      fail("sweep.omega_min", "must be <= omega_max");
    if (*s.omega_min == *s.omega_max && s.count > 1)
      fail("sweep.count", "must be 1 when omega_min == omega_max");
  }
  if (j.contains("directions"))
  {
    const json &d = j.at("directions");
    if (!d.is_array() || d.empty())
      fail("sweep.directions", "expected a nonempty array of \"x\", \"y\", \"z\"");
    std::vector<int> dirs;
    for (const auto &v : d)
    {
      const std::string name = v.is_string() ? v.get<std::string>() : "";
      if (name != "x" && name != "y" && name != "z")
        fail("sweep.directions", "expected a nonempty array of \"x\", \"y\", \"z\"");
      dirs.push_back(name[0] - 'x');
    }
    std::sort(dirs.begin(), dirs.end());
    if (std::adjacent_find(dirs.begin(), dirs.end()) != dirs.end())
      fail("sweep.directions", "duplicate direction");
    s.directions = std::move(dirs);
  }
  if (j.contains("tol"))
  {
    s.tol = get_number(j, "sweep", "tol");
    if (!(s.tol > 0.0) || s.tol >= 1.0)
      fail("sweep.tol", "must be in (0, 1)");
  }
  if (j.contains("max_iter"))
  {
    s.max_iter = get_integer(j, "sweep", "max_iter");
    if (s.max_iter < 1)
      fail("sweep.max_iter", "must be >= 1");
  }
  if (j.contains("precond"))
  {
    const auto kind = parse_preconditioner(get_string(j, "sweep", "precond"));
    if (!kind)
      fail("sweep.precond", "expected one of none, projection, exact, laplacian, circulant");
    s.precond = *kind;
  }
  if (j.contains("workers"))
  {
    const long w = get_integer(j, "sweep", "workers");
    if (w < 1 || w > 1024)
      fail("sweep.workers", "must be in [1, 1024]");
    s.workers = static_cast<int>(w);
  }
  if (j.contains("chi_scale"))
  {
    s.chi_scale = get_number(j, "sweep", "chi_scale");
    if (s.chi_scale == 0.0)
      fail("sweep.chi_scale", "must be nonzero");
  }
  if (j.contains("band_alpha"))
  {
    if (!j.at("band_alpha").is_boolean())
      fail("sweep.band_alpha", "expected a boolean");
    s.band_alpha = j.at("band_alpha").get<bool>();
  }
  return s;
}

json vec_json(const Vec3d &v) { return json::array({v.x, v.y, v.z}); }

json mesh_json(const MeshConfig &m)
{
  json shape = {{"kind", m.shape.kind == ShapeKind::Box ? "box" : "cylinder_z"}};
  if (m.shape.kind == ShapeKind::CylinderZ)
    shape["radius"] = m.shape.radius;
  return {{"dims", {m.dims.nx, m.dims.ny, m.dims.nz}}, {"h", m.h}, {"shape", shape}};
}

json material_json(const MaterialConfig &m)
{
  return {{"A", m.A},
          {"K", m.K},
          {"alpha", m.alpha},
          {"u", vec_json(m.u)},
          {"ell", vec_json(m.ell)},
          {"anisotropy_form", m.anisotropy_form == AnisotropyForm::Printed ? "printed" : "easy_axis"}};
}

std::size_t line_of(const std::string &text, std::size_t byte)
{
  return 1 + static_cast<std::size_t>(
               std::count(text.begin(), text.begin() + static_cast<long>(std::min(byte, text.size())), '\n'));
}

}  // namespace

bool operator==(const RunConfig &a, const RunConfig &b) { return to_json(a) == to_json(b); }

RunConfig parse_config(const std::string &text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    std::ostringstream msg;
    msg << "line " << line_of(text, e.byte == 0 ? 0 : e.byte - 1) << ": " << e.what();
    throw Error(ErrorCode::Config, msg.str());
  }
  check_keys(j, "", {"mesh", "material", "equilibrium", "sweep", "output"});
  RunConfig c;
  if (!j.contains("mesh"))
    fail("mesh", "missing required section");
  if (!j.contains("material"))
    fail("material", "missing required section");
  c.mesh = parse_mesh(j.at("mesh"));
  c.material = parse_material(j.at("material"));
  if (j.contains("equilibrium"))
    c.equilibrium = parse_equilibrium(j.at("equilibrium"));
  if (j.contains("sweep"))
    c.sweep = parse_sweep(j.at("sweep"));
  if (j.contains("output"))
  {
    check_keys(j.at("output"), "output", {"dir"});
    if (j.at("output").contains("dir"))
      c.output.dir = get_string(j.at("output"), "output", "dir");
  }
  return c;
}

RunConfig load_config(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::Config, "cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_json(const RunConfig &c)
{
  json sweep = {{"count", c.sweep.count},
                {"tol", c.sweep.tol},
                {"max_iter", c.sweep.max_iter},
                {"precond", std::string(to_string(c.sweep.precond))},
                {"workers", c.sweep.workers},
                {"chi_scale", c.sweep.chi_scale},
                {"band_alpha", c.sweep.band_alpha}};
  if (c.sweep.omega_min)
    sweep["omega_min"] = *c.sweep.omega_min;
  if (c.sweep.omega_max)
    sweep["omega_max"] = *c.sweep.omega_max;
  if (c.sweep.omegas)
    sweep["omegas"] = *c.sweep.omegas;
  json dirs = json::array();
  for (int d : c.sweep.directions)
    dirs.push_back(std::string(1, static_cast<char>('x' + d)));
  sweep["directions"] = dirs;
  const json j = {{"mesh", mesh_json(c.mesh)},
                  {"material", material_json(c.material)},
                  {"equilibrium",
                   {{"m0", vec_json(c.equilibrium.m0)},
                    {"tol_eq", c.equilibrium.tol_eq},
                    {"max_steps", c.equilibrium.max_steps}}},
                  {"sweep", sweep},
                  {"output", {{"dir", c.output.dir}}}};
  return j.dump(2) + "\n";
}

std::uint64_t param_hash(const RunConfig &c)
{
  const std::string canon =
    json{{"mesh", mesh_json(c.mesh)}, {"material", material_json(c.material)}}.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canon)
  {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::shared_ptr<const Mesh> build_mesh(const RunConfig &c)
{
  return make_mesh(c.mesh.dims, c.mesh.h, c.mesh.shape);
}

MaterialParams build_material(const RunConfig &c, const std::shared_ptr<const Mesh> &mesh)
{
  const auto &m = c.material;
  return MaterialParams::uniform(mesh, m.A, m.K, m.alpha, m.u, m.ell, m.anisotropy_form);
}

VectorField build_initial_m(const RunConfig &c, const std::shared_ptr<const Mesh> &mesh)
{
  return VectorField::uniform(mesh, c.equilibrium.m0);
}

SweepPlan build_plan(const RunConfig &c)
{
  if (!c.sweep.omegas && (!c.sweep.omega_min || !c.sweep.omega_max))
    fail("sweep", "no frequencies configured");
  SweepPlan plan;
  plan.frequencies = c.sweep.omegas ? *c.sweep.omegas
                                    : log_spaced_descending(*c.sweep.omega_min, *c.sweep.omega_max,
                                                            c.sweep.count);
  plan.directions = c.sweep.directions;
  plan.tol = c.sweep.tol;
  plan.max_iter = c.sweep.max_iter;
  plan.precond = c.sweep.precond;
  plan.precond_options.band_alpha = c.sweep.band_alpha;
  plan.workers = c.sweep.workers;
  plan.chi_scale = c.sweep.chi_scale;
  return plan;
}

std::shared_ptr<const EffectiveField> build_field(const RunConfig &c)
{
  const auto mesh = build_mesh(c);
  auto kernel = std::make_shared<const DemagKernel>(mesh);
  return std::make_shared<const EffectiveField>(mesh, build_material(c, mesh), kernel);
}

}  // namespace fsusc
