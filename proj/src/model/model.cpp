#include "saturn/model/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

namespace saturn::model {

namespace {

constexpr char kMagic[4] = {'S', 'A', 'T', 'M'};

Parameter weight(std::string name, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  const double bound = std::sqrt(1.0 / static_cast<double>(cols));
  Tensor t(rows, cols);
  for (double& x : t.data()) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x = (2.0 * u - 1.0) * bound;
  }
  return Parameter(std::move(name), std::move(t));
}

Parameter filled(std::string name, std::size_t rows, double value) {
  return Parameter(std::move(name), Tensor(rows, 1, value));
}

CombineMlp combine_mlp(const std::string& prefix, std::size_t input, const HyperParams& hp, std::mt19937_64& rng) {
  CombineMlp mlp;
  mlp.w1 = weight(prefix + ".w1", hp.m, input, rng);
  mlp.b1 = filled(prefix + ".b1", hp.m, 0.0);
  mlp.w3 = weight(prefix + ".w3", hp.n, hp.m, rng);
  mlp.b3 = filled(prefix + ".b3", hp.n, 0.0);
  mlp.ln_gain = filled(prefix + ".ln_gain", hp.n, 1.0);
  mlp.ln_bias = filled(prefix + ".ln_bias", hp.n, 0.0);
  return mlp;
}

template <typename M, typename P>
std::vector<P*> collect(M& model) {
  std::vector<P*> out;
  for (auto& a : model.embed) {
    out.push_back(&a.weight);
    out.push_back(&a.bias);
  }
  for (auto& k : model.kernels) out.push_back(&k);
  for (auto* a : {&model.promote_symbol, &model.promote_clause}) {
    out.push_back(&a->weight);
    out.push_back(&a->bias);
  }
  out.push_back(&model.rules);
  auto add_mlp = [&](auto& mlp) {
    for (auto* p : {&mlp.w1, &mlp.b1, &mlp.w3, &mlp.b3, &mlp.ln_gain, &mlp.ln_bias}) out.push_back(p);
  };
  add_mlp(model.gage);
  out.push_back(&model.variable);
  add_mlp(model.gweight);
  out.push_back(&model.head_hidden.weight);
  out.push_back(&model.head_hidden.bias);
  out.push_back(&model.head_out);
  return out;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

bool read_u32(std::istream& in, std::uint32_t& v) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) return false;
  v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return true;
}

void write_f64(std::ostream& out, double x) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

}  // namespace

void HyperParams::validate() const {
  if (n == 0 || m == 0 || r == 0) throw std::invalid_argument("model sizes n, m and r must be positive");
  if (r <= static_cast<std::uint32_t>(logic::Rule::Factoring)) {
    throw std::invalid_argument("rule vocabulary must cover every inference rule");
  }
  if (f != logic::kSimpleFeatureCount) {
    throw std::invalid_argument("feature count must be " + std::to_string(logic::kSimpleFeatureCount));
  }
}

std::vector<Parameter*> Model::parameters() { return collect<Model, Parameter>(*this); }
std::vector<const Parameter*> Model::parameters() const { return collect<const Model, const Parameter>(*this); }

std::size_t Model::scalar_count() const {
  std::size_t total = 0;
  for (const Parameter* p : parameters()) total += p->value.size();
  return total;
}

void Model::zero_grad() {
  for (Parameter* p : parameters()) p->zero_grad();
}

Model init_model(const HyperParams& hp, std::uint64_t seed) {
  hp.validate();
  std::mt19937_64 rng(seed);
  Model model;
  model.hp = hp;
  for (std::size_t kind = 0; kind < graph::kNodeKinds; ++kind) {
    std::string prefix = "embed." + std::string(graph::node_kind_name(static_cast<graph::NodeKind>(kind)));
    model.embed[kind].weight = weight(prefix + ".weight", hp.n, graph::kFeatureWidth[kind], rng);
    model.embed[kind].bias = filled(prefix + ".bias", hp.n, 0.0);
  }
  for (std::uint32_t round = 0; round < hp.k; ++round) {
    for (std::size_t d = 0; d < kDirectedEdgeKinds; ++d) {
      std::string prefix = "gnn.round" + std::to_string(round) + ".edge" + std::to_string(d / 2 + 1) + (d % 2 ? "r" : "f");
      model.kernels.push_back(weight(prefix + ".self", hp.n, hp.n, rng));
      model.kernels.push_back(weight(prefix + ".neighbour", hp.n, hp.n, rng));
    }
  }
  model.promote_symbol = {weight("promote.symbol.weight", hp.n, hp.n, rng), filled("promote.symbol.bias", hp.n, 0.0)};
  model.promote_clause = {weight("promote.clause.weight", hp.n, hp.n, rng), filled("promote.clause.bias", hp.n, 0.0)};
  model.rules = weight("rules", hp.n, hp.r, rng);
  model.gage = combine_mlp("gage", 3 * hp.n, hp, rng);
  model.variable = weight("variable", hp.n, 1, rng);
  model.gweight = combine_mlp("gweight", 3 * hp.n + 1, hp, rng);
  model.head_hidden = {weight("head.w1", hp.m, 2 * hp.n + hp.f, rng), filled("head.b", hp.m, 0.0)};
  // Stored as a column and used transposed, so fan-in is m.
  Parameter out = weight("head.w3", 1, hp.m, rng);
  model.head_out = Parameter("head.w3", Tensor(hp.m, 1));
  for (std::size_t i = 0; i < hp.m; ++i) model.head_out.value[i] = out.value[i];
  return model;
}

ModelVars::ModelVars(Tape& tape, Model& model) : hp(model.hp) {
  std::vector<Var> vars;
  for (Parameter* p : model.parameters()) vars.push_back(tape.parameter(*p));
  assign(vars);
}

ModelVars::ModelVars(Tape& tape, const Model& model) : hp(model.hp) {
  std::vector<Var> vars;
  for (const Parameter* p : model.parameters()) vars.push_back(tape.parameter(*p));
  assign(vars);
}

void ModelVars::assign(const std::vector<Var>& vars) {
  std::size_t i = 0;
  for (auto& e : embed) {
    e.first = vars[i++];
    e.second = vars[i++];
  }
  kernels.resize(static_cast<std::size_t>(hp.k) * kDirectedEdgeKinds);
  for (auto& k : kernels) {
    k.first = vars[i++];
    k.second = vars[i++];
  }
  promote_symbol = {vars[i], vars[i + 1]};
  promote_clause = {vars[i + 2], vars[i + 3]};
  i += 4;
  rules = vars[i++];
  for (Var& v : gage) v = vars[i++];
  variable = vars[i++];
  for (Var& v : gweight) v = vars[i++];
  head_hidden = {vars[i], vars[i + 1]};
  head_out = vars[i + 2];
}

void save_model(std::ostream& out, const Model& model) {
  out.write(kMagic, 4);
  write_u32(out, kModelFormatVersion);
  for (std::uint32_t v : {model.hp.n, model.hp.m, model.hp.k, model.hp.r, model.hp.f}) write_u32(out, v);
  for (const Parameter* p : model.parameters()) {
    write_u32(out, static_cast<std::uint32_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    write_u32(out, static_cast<std::uint32_t>(p->value.rows()));
    write_u32(out, static_cast<std::uint32_t>(p->value.cols()));
    for (double x : p->value.data()) write_f64(out, x);
  }
  if (!out) throw std::runtime_error("failed to write model");
}

void save_model(const std::string& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save_model(out, model);
}

Model load_model(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw ModelFormatError("not a model file (bad magic)");
  std::uint32_t version = 0;
  if (!read_u32(in, version)) throw ModelFormatError("model file truncated in header");
  if (version != kModelFormatVersion) {
    throw ModelFormatError("unsupported model format version " + std::to_string(version) + " (expected " +
                           std::to_string(kModelFormatVersion) + ")");
  }
  HyperParams hp;
  for (std::uint32_t* v : {&hp.n, &hp.m, &hp.k, &hp.r, &hp.f}) {
    if (!read_u32(in, *v)) throw ModelFormatError("model file truncated in header");
  }
  try {
    hp.validate();
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("invalid model header: ") + e.what());
  }
  // Shapes and names come from the header; the file must agree with them.
  Model model = init_model(hp, 0);
  for (Parameter* p : model.parameters()) {
    std::uint32_t len = 0, rows = 0, cols = 0;
    if (!read_u32(in, len)) throw ModelFormatError("model file truncated before tensor " + p->name);
    std::string name(len, '\0');
    if (len > 4096 || !in.read(name.data(), len)) throw ModelFormatError("model file truncated in name of tensor " + p->name);
    if (name != p->name) throw ModelFormatError("expected tensor " + p->name + ", found " + name);
    if (!read_u32(in, rows) || !read_u32(in, cols)) throw ModelFormatError("model file truncated in shape of tensor " + p->name);
    if (rows != p->value.rows() || cols != p->value.cols()) {
      throw ModelFormatError("shape mismatch for tensor " + p->name + ": file has " + std::to_string(rows) + "x" +
                             std::to_string(cols) + ", header implies " + p->value.shape_string());
    }
    std::vector<unsigned char> raw(p->value.size() * 8);
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
      throw ModelFormatError("model file truncated in tensor " + p->name);
    }
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(raw[i * 8 + b]) << (8 * b);
      p->value[i] = std::bit_cast<double>(bits);
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) throw ModelFormatError("trailing data after last tensor");
  return model;
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelFormatError("cannot open model file " + path);
  try {
    return load_model(in);
  } catch (const ModelFormatError& e) {
    throw ModelFormatError(path + ": " + e.what());
  }
}

}  // namespace saturn::model
