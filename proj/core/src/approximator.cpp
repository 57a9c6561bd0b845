#include "ratsteer/approximator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ratsteer {

void ReplayBuffer::push(Transition t) {
  if (buf_.size() < capacity_) {
    buf_.push_back(std::move(t));
  } else {
    buf_[next_] = std::move(t);
    next_ = (next_ + 1) % capacity_;
  }
}

std::vector<Transition> ReplayBuffer::sample(std::mt19937_64& rng) const {
  if (buf_.size() < batch_size_)
    throw std::logic_error("ReplayBuffer: not enough transitions to sample");
  // partial Fisher-Yates over an index vector
  std::vector<std::size_t> idx(buf_.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<Transition> batch;
  batch.reserve(batch_size_);
  for (std::size_t i = 0; i < batch_size_; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
    batch.push_back(buf_[idx[i]]);
  }
  return batch;
}

ValueNet::ValueNet(std::vector<int> layer_sizes, double learning_rate, double discount,
                   std::uint64_t seed)
    : sizes_(std::move(layer_sizes)), alpha_(learning_rate), gamma_(discount) {
  if (sizes_.size() < 2) throw std::invalid_argument("ValueNet: need input and output sizes");
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    Layer layer;
    const int in = sizes_[l], out = sizes_[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> u(-bound, bound);
    layer.w.resize(static_cast<std::size_t>(out) * in);
    layer.b.assign(out, 0.0);
    for (auto& w : layer.w) w = u(rng);
    main_.push_back(std::move(layer));
  }
  target_ = main_;
}

std::vector<double> ValueNet::run(const std::vector<Layer>& layers,
                                  std::span<const double> input) const {
  if (static_cast<int>(input.size()) != sizes_.front())
    throw std::invalid_argument("ValueNet: input dimension mismatch");
  std::vector<double> a(input.begin(), input.end());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const int in = sizes_[l], out = sizes_[l + 1];
    std::vector<double> z(out);
    for (int o = 0; o < out; ++o) {
      double acc = layers[l].b[o];
      const double* row = &layers[l].w[static_cast<std::size_t>(o) * in];
      for (int i = 0; i < in; ++i) acc += row[i] * a[i];
      z[o] = acc;
    }
    if (l + 1 < layers.size()) {
      for (auto& v : z) v = std::max(v, 0.0);  // ReLU on hidden layers
    }
    a = std::move(z);
  }
  return a;
}

std::vector<double> ValueNet::forward(std::span<const double> input, bool use_target) const {
  return run(use_target ? target_ : main_, input);
}

namespace {
double td_target(const ValueNet& net, const Transition& t) {
  if (t.terminal) return t.reward;
  const auto next_q = net.forward(t.next_state, /*use_target=*/true);
  return t.reward + net.discount() * *std::max_element(next_q.begin(), next_q.end());
}
}  // namespace

double ValueNet::td_loss(std::span<const Transition> batch) const {
  if (batch.empty()) throw std::invalid_argument("td_loss: empty batch");
  double loss = 0.0;
  for (const auto& t : batch) {
    const double y = td_target(*this, t);
    const double q = forward(t.state)[t.choice];
    loss += (q - y) * (q - y);
  }
  return loss / static_cast<double>(batch.size());
}

void ValueNet::accumulate_gradient(const Transition& t, double inv_batch,
                                   std::vector<Layer>& grad) const {
  // forward pass keeping pre- and post-activation values
  std::vector<std::vector<double>> acts;  // post-activation, acts[0] = input
  acts.emplace_back(t.state.begin(), t.state.end());
  std::vector<std::vector<double>> pre;  // pre-activation per layer
  for (std::size_t l = 0; l < main_.size(); ++l) {
    const int in = sizes_[l], out = sizes_[l + 1];
    std::vector<double> z(out);
    for (int o = 0; o < out; ++o) {
      double acc = main_[l].b[o];
      const double* row = &main_[l].w[static_cast<std::size_t>(o) * in];
      for (int i = 0; i < in; ++i) acc += row[i] * acts.back()[i];
      z[o] = acc;
    }
    pre.push_back(z);
    if (l + 1 < main_.size())
      for (auto& v : z) v = std::max(v, 0.0);
    acts.push_back(std::move(z));
  }

  const double y = td_target(*this, t);
  const double q = acts.back()[t.choice];
  if (!std::isfinite(q) || !std::isfinite(y))
    throw std::runtime_error("td_update: non-finite value in batch");

  // dL/dq on the chosen output only, L = mean (q - y)^2
  std::vector<double> delta(sizes_.back(), 0.0);
  delta[t.choice] = 2.0 * (q - y) * inv_batch;

  for (int l = static_cast<int>(main_.size()) - 1; l >= 0; --l) {
    const int in = sizes_[l], out = sizes_[l + 1];
    std::vector<double> prev_delta(in, 0.0);
    for (int o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      grad[l].b[o] += d;
      double* grow = &grad[l].w[static_cast<std::size_t>(o) * in];
      const double* wrow = &main_[l].w[static_cast<std::size_t>(o) * in];
      for (int i = 0; i < in; ++i) {
        grow[i] += d * acts[l][i];
        prev_delta[i] += d * wrow[i];
      }
    }
    if (l > 0) {
      // ReLU derivative w.r.t. the previous pre-activation
      for (int i = 0; i < in; ++i)
        if (pre[l - 1][i] <= 0.0) prev_delta[i] = 0.0;
    }
    delta = std::move(prev_delta);
  }
}

std::vector<double> ValueNet::td_gradient(std::span<const Transition> batch) const {
  std::vector<Layer> grad;
  for (const auto& l : main_)
    grad.push_back({std::vector<double>(l.w.size(), 0.0), std::vector<double>(l.b.size(), 0.0)});
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (const auto& t : batch) accumulate_gradient(t, inv, grad);
  std::vector<double> flat;
  for (const auto& l : grad) {
    flat.insert(flat.end(), l.w.begin(), l.w.end());
    flat.insert(flat.end(), l.b.begin(), l.b.end());
  }
  return flat;
}

double ValueNet::td_update(std::span<const Transition> batch) {
  if (batch.empty()) throw std::invalid_argument("td_update: empty batch");
  const double loss = td_loss(batch);
  std::vector<Layer> grad;
  for (const auto& l : main_)
    grad.push_back({std::vector<double>(l.w.size(), 0.0), std::vector<double>(l.b.size(), 0.0)});
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (const auto& t : batch) accumulate_gradient(t, inv, grad);
  for (std::size_t l = 0; l < main_.size(); ++l) {
    for (std::size_t i = 0; i < main_[l].w.size(); ++i) main_[l].w[i] -= alpha_ * grad[l].w[i];
    for (std::size_t i = 0; i < main_[l].b.size(); ++i) main_[l].b[i] -= alpha_ * grad[l].b[i];
  }
  return loss;
}

void ValueNet::sync_target() { target_ = main_; }

std::vector<double> ValueNet::flat_params() const {
  std::vector<double> flat;
  for (const auto& l : main_) {
    flat.insert(flat.end(), l.w.begin(), l.w.end());
    flat.insert(flat.end(), l.b.begin(), l.b.end());
  }
  return flat;
}

void ValueNet::set_flat_params(std::span<const double> p) {
  std::size_t off = 0;
  for (auto& l : main_) {
    std::copy_n(p.begin() + off, l.w.size(), l.w.begin());
    off += l.w.size();
    std::copy_n(p.begin() + off, l.b.size(), l.b.begin());
    off += l.b.size();
  }
  if (off != p.size()) throw std::invalid_argument("set_flat_params: size mismatch");
}

std::size_t ValueNet::num_params() const {
  std::size_t n = 0;
  for (const auto& l : main_) n += l.w.size() + l.b.size();
  return n;
}

void ValueNet::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("ValueNet::save: cannot open " + file.string());
  out << "ratsteer-valuenet v1\n";
  out << sizes_.size();
  for (int s : sizes_) out << ' ' << s;
  out << '\n';
  out.precision(17);
  out << alpha_ << ' ' << gamma_ << '\n';
  auto dump = [&](const std::vector<Layer>& layers) {
    for (const auto& l : layers) {
      for (double w : l.w) out << w << ' ';
      for (double b : l.b) out << b << ' ';
      out << '\n';
    }
  };
  dump(main_);
  dump(target_);
}

ValueNet ValueNet::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("ValueNet::load: cannot open " + file.string());
  std::string magic, version;
  in >> magic >> version;
  if (magic != "ratsteer-valuenet" || version != "v1")
    throw std::runtime_error("ValueNet::load: bad header in " + file.string());
  std::size_t n;
  in >> n;
  std::vector<int> sizes(n);
  for (auto& s : sizes) in >> s;
  double alpha, gamma;
  in >> alpha >> gamma;
  ValueNet net(sizes, alpha, gamma, /*seed=*/0);
  auto slurp = [&](std::vector<Layer>& layers) {
    for (auto& l : layers) {
      for (auto& w : l.w) in >> w;
      for (auto& b : l.b) in >> b;
    }
  };
  slurp(net.main_);
  slurp(net.target_);
  if (!in) throw std::runtime_error("ValueNet::load: truncated file " + file.string());
  return net;
}

}  // namespace ratsteer
