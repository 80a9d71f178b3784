#include "aoii/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace aoii {

long guarded_ceil(double x) {
  const double f = std::floor(x);
  const double eps = 1e-12 * std::max(1.0, std::fabs(x));
  if (x - f <= eps) return static_cast<long>(f);
  return static_cast<long>(std::ceil(x));
}

int min_age_cap(double q, double S, double p) {
  const double x = p * q / (S * (1.0 - q));
  if (!(x < 1e9)) return 1000000000;  // saturate for unusable instances
  return static_cast<int>(guarded_ceil(x));
}

int default_age_cap(double q, double S, double p) {
  return std::max(min_age_cap(q, S, p) + 5, 8);
}

ModelParams make_params(double q, double q1, double S, double p,
                        std::optional<int> cap) {
  ModelParams mp{q, q1, S, p, 0};
  mp.K = cap ? *cap : default_age_cap(q, S, p);
  return mp;
}

std::vector<std::string> validate(const ModelParams& mp) {
  std::vector<std::string> errs;
  auto fail = [&errs](const std::string& msg) { errs.push_back(msg); };

  if (!(mp.q > 0.0 && mp.q < 1.0)) {
    std::ostringstream os;
    os << "q must lie in (0,1), got " << mp.q;
    fail(os.str());
  }
  if (!(mp.q1 > 0.0 && mp.q1 <= 1.0)) {
    std::ostringstream os;
    os << "q1 must lie in (0,1], got " << mp.q1;
    fail(os.str());
  }
  if (!(mp.S > 0.0)) {
    std::ostringstream os;
    os << "S must be positive, got " << mp.S;
    fail(os.str());
  }
  if (!(mp.p > 0.0)) {
    std::ostringstream os;
    os << "p must be positive, got " << mp.p;
    fail(os.str());
  }
  if (errs.empty()) {
    const int cap = min_age_cap(mp.q, mp.S, mp.p);
    if (mp.K < cap) {
      std::ostringstream os;
      os << "K=" << mp.K << " is below the minimum lossless cap " << cap
         << " = ceil(p*q/(S*(1-q)))";
      fail(os.str());
    }
  }
  return errs;
}

void require_valid(const ModelParams& mp) {
  const auto errs = validate(mp);
  if (errs.empty()) return;
  std::string msg = "invalid model parameters: ";
  for (std::size_t i = 0; i < errs.size(); ++i) {
    if (i) msg += "; ";
    msg += errs[i];
  }
  throw std::invalid_argument(msg);
}

int state_index(SysState s) {
  if (s.serving) return 1;
  return s.v == 0 ? 0 : s.v + 1;
}

SysState state_at(int index) {
  if (index < 0) throw std::invalid_argument("state index must be nonnegative");
  if (index == 0) return synced_state();
  if (index == 1) return serving_state();
  return aged_state(index - 1);
}

int state_count(const ModelParams& mp) { return mp.K + 2; }

std::vector<SysState> enumerate_states(const ModelParams& mp) {
  std::vector<SysState> out;
  out.reserve(static_cast<std::size_t>(state_count(mp)));
  out.push_back(synced_state());
  out.push_back(serving_state());
  for (int v = 1; v <= mp.K; ++v) out.push_back(aged_state(v));
  return out;
}

bool admissible(SysState s, Action a, const ModelParams& mp) {
  if (s.v == 0) return a == Action::idle;  // covers (0,0) and (0,1)
  if (s.v >= mp.K) return a == Action::sample;
  return true;
}

namespace {

void check_state_action(SysState s, Action a, const ModelParams& mp,
                        const char* what) {
  if (s.serving && s.v != 0)
    throw std::invalid_argument(std::string(what) +
                                ": serving state must have v = 0");
  if (s.v < 0 || s.v > mp.K) {
    std::ostringstream os;
    os << what << ": v=" << s.v << " outside [0, K=" << mp.K << "]";
    throw std::invalid_argument(os.str());
  }
  if (!admissible(s, a, mp)) {
    std::ostringstream os;
    os << what << ": action " << (a == Action::sample ? "sample" : "idle")
       << " inadmissible at state (" << s.v << "," << (s.serving ? 1 : 0)
       << ")";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

double step_cost(SysState s, Action a, const ModelParams& mp) {
  check_state_action(s, a, mp, "step_cost");
  double c = mp.S * s.v;
  if (a == Action::sample) c += mp.q * mp.p;
  return c;
}

void TransitionRow::add(SysState next, double prob) {
  if (prob <= 0.0) return;  // rows keep strictly positive entries only
  entries_[static_cast<std::size_t>(size_++)] = TransitionEntry{next, prob};
}

double TransitionRow::total() const {
  double t = 0.0;
  for (int i = 0; i < size_; ++i) t += entries_[static_cast<std::size_t>(i)].prob;
  return t;
}

TransitionRow transitions(SysState s, Action a, const ModelParams& mp) {
  check_state_action(s, a, mp, "transitions");
  TransitionRow row;
  if (s.serving) {
    row.add(serving_state(), 1.0 - mp.q1);
    row.add(aged_state(1), mp.q1);
    return row;
  }
  if (s.v == 0) {
    row.add(synced_state(), 1.0 - mp.q);
    row.add(aged_state(1), mp.q);
    return row;
  }
  if (a == Action::sample) {
    row.add(synced_state(), mp.q);
    row.add(serving_state(), 1.0 - mp.q);
  } else {
    row.add(aged_state(s.v + 1), 1.0 - mp.q);
    row.add(synced_state(), mp.q);
  }
  return row;
}

}  // namespace aoii
