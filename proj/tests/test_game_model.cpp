// Copyright 2026 The nashmg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nashmg/errors.hpp"
#include "nashmg/evaluation.hpp"
#include "nashmg/game_model.hpp"
#include "nashmg/serialization.hpp"
#include "oracles.hpp"

using namespace nashmg;

namespace {

// Raw (unscaled) one-hot instance over two states, one action per side,
// deterministic 0.7/0.3 style kernel rows; used for hand arithmetic on phi_v.
LinearMixtureGame raw_one_hot_game() {
  LinearMixtureGame g;
  g.num_states = 2;
  g.num_actions_max = 1;
  g.num_actions_min = 1;
  g.horizon = 1;
  g.dim = 4;
  g.features.assign(2 * 1 * 1 * 2 * 4, 0.0);
  // flat index (s,a,b,s') = s*2 + s'
  for (int s = 0; s < 2; ++s) {
    for (int sp = 0; sp < 2; ++sp) {
      g.features[g.feature_offset(s, 0, 0, sp) + (s * 2 + sp)] = 1.0;
    }
  }
  Eigen::VectorXd theta(4);
  theta << 0.7, 0.3, 1.0, 0.0;  // P(.|s=0) = (0.7, 0.3), P(.|s=1) = (1, 0)
  g.theta = {theta};
  g.rewards = {0.5, -0.5};
  g.param_bound = theta.norm();
  return g;
}

}  // namespace

TEST_CASE("phi_v is linear and zero on the zero function") {
  const LinearMixtureGame g = raw_one_hot_game();
  const std::vector<double> zeros{0.0, 0.0};
  CHECK(phi_v(g, zeros, 0, 0, 0).norm() == 0.0);

  const std::vector<double> v{1.0, -1.0};
  const Eigen::VectorXd out = phi_v(g, v, 0, 0, 0);
  CHECK(out[0] == doctest::Approx(1.0));   // index (s'=0, s=0)
  CHECK(out[1] == doctest::Approx(-1.0));  // index (s'=1, s=0)
  CHECK(out[2] == doctest::Approx(0.0));
  CHECK(out[3] == doctest::Approx(0.0));

  // Scaling V scales phi_V exactly.
  const std::vector<double> v3{3.0, -3.0};
  CHECK((phi_v(g, v3, 0, 0, 0) - 3.0 * out).norm() == 0.0);
}

TEST_CASE("phi_v components match the brute-force sum on a random mixture") {
  Rng rng(91);
  const LinearMixtureGame g = random_instance(2, 3, 2, 2, 2, rng);
  Rng vr(5);
  std::vector<double> v(3);
  for (auto& x : v) x = 2.0 * vr.uniform() - 1.0;
  for (int s = 0; s < 3; ++s) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const Eigen::VectorXd got = phi_v(g, v, s, a, b);
        for (int i = 0; i < 2; ++i) {
          double expect = 0.0;
          for (int sp = 0; sp < 3; ++sp) expect += g.feature(s, a, b, sp)[i] * v[sp];
          CHECK(got[i] == doctest::Approx(expect).epsilon(1e-14));
        }
      }
    }
  }
}

TEST_CASE("transition_prob reads the kernel back") {
  const LinearMixtureGame g = raw_one_hot_game();
  CHECK(transition_prob(g, 0, 0, 0, 0, 0) == 0.7);
  CHECK(transition_prob(g, 0, 0, 0, 0, 1) == 0.3);
  CHECK(transition_prob(g, 0, 1, 0, 0, 0) == 1.0);
  double row = 0.0;
  for (int sp = 0; sp < 2; ++sp) row += transition_prob(g, 0, 0, 0, 0, sp);
  CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(transition_prob(g, 0, 0, 0, 0, 5), ConfigError);
}

TEST_CASE("sample_next_state determinism and distribution") {
  // Point-mass kernel: build a tabular instance with a deterministic row.
  std::vector<double> kernel(4 * 1 * 1 * 4, 0.0);
  for (int s = 0; s < 4; ++s) kernel[s * 4 + 3] = 1.0;  // everything goes to 3
  std::vector<double> reward(4, 0.0);
  const LinearMixtureGame det = make_tabular(4, 1, 1, 1, kernel, reward);
  Rng r1(10);
  for (int i = 0; i < 20; ++i) CHECK(sample_next_state(det, 0, i % 4, 0, 0, r1) == 3);

  // Uniform kernel over 4 states: frequencies inside a 4-sigma binomial band.
  std::vector<double> uniform_kernel(4 * 4, 0.25);
  const LinearMixtureGame uni = make_tabular(4, 1, 1, 1, uniform_kernel, reward);
  Rng r2(77);
  std::vector<int> counts(4, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[sample_next_state(uni, 0, 0, 0, 0, r2)];
  const double sigma = std::sqrt(0.25 * 0.75 / n);
  for (int sp = 0; sp < 4; ++sp) {
    CHECK(std::abs(counts[sp] / static_cast<double>(n) - 0.25) <= 4.0 * sigma);
  }

  // Same seed, same sequence.
  Rng a(123), b(123);
  for (int i = 0; i < 50; ++i) {
    CHECK(sample_next_state(uni, 0, 0, 0, 0, a) == sample_next_state(uni, 0, 0, 0, 0, b));
  }
}

TEST_CASE("make_tabular flattens the kernel with a power-of-two scale") {
  // S=2, A=B=1, H=1, P = ((0.3, 0.7), (1, 0)).
  const std::vector<double> kernel{0.3, 0.7, 1.0, 0.0};
  const std::vector<double> reward{0.1, -0.2};
  const LinearMixtureGame g = make_tabular(2, 1, 1, 1, kernel, reward);
  CHECK(g.dim == 4);
  const double scale = tabular_feature_scale(2);
  CHECK(scale == 2.0);  // smallest power of two with scale^2 >= 2
  CHECK(g.theta[0][0] == doctest::Approx(scale * 0.3));
  CHECK(g.theta[0][1] == doctest::Approx(scale * 0.7));
  CHECK(g.theta[0][2] == doctest::Approx(scale * 1.0));
  CHECK(g.theta[0][3] == doctest::Approx(scale * 0.0));
  CHECK(g.param_bound ==
        doctest::Approx(scale * std::sqrt(0.09 + 0.49 + 1.0)).epsilon(1e-12));

  // Bit-exact kernel round-trip.
  CHECK(transition_prob(g, 0, 0, 0, 0, 0) == 0.3);
  CHECK(transition_prob(g, 0, 0, 0, 0, 1) == 0.7);
  CHECK(transition_prob(g, 0, 1, 0, 0, 0) == 1.0);
  CHECK(transition_prob(g, 0, 1, 0, 0, 1) == 0.0);

  // |phi_V| <= 1 on every vertex of [-1,1]^S.
  for (int mask = 0; mask < 4; ++mask) {
    const std::vector<double> v{mask & 1 ? 1.0 : -1.0, mask & 2 ? 1.0 : -1.0};
    for (int s = 0; s < 2; ++s) {
      CHECK(phi_v(g, v, s, 0, 0).norm() <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("random tabular kernels round-trip bit-exactly") {
  Rng rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    const int S = 2 + static_cast<int>(rng.uniform() * 3);
    std::vector<double> kernel(static_cast<size_t>(2) * S * 2 * 2 * S);
    std::vector<double> reward(static_cast<size_t>(2) * S * 2 * 2, 0.0);
    for (std::size_t row = 0; row < kernel.size() / S; ++row) {
      double total = 0.0;
      for (int sp = 0; sp < S; ++sp) total += kernel[row * S + sp] = rng.uniform() + 1e-3;
      for (int sp = 0; sp < S; ++sp) kernel[row * S + sp] /= total;
    }
    const LinearMixtureGame g = make_tabular(S, 2, 2, 2, kernel, reward);
    std::size_t row = 0;
    for (int h = 0; h < 2; ++h) {
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b, ++row) {
            for (int sp = 0; sp < S; ++sp) {
              CHECK(transition_prob(g, h, s, a, b, sp) == kernel[row * S + sp]);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("make_tabular rejects malformed kernels") {
  std::vector<double> kernel{0.5, 0.4, 1.0, 0.0};  // first row sums to 0.9
  std::vector<double> reward{0.0, 0.0};
  CHECK_THROWS_AS(make_tabular(2, 1, 1, 1, kernel, reward), ValidationError);
}

TEST_CASE("turn-based embedding ignores the dummy axis") {
  Rng rng(8);
  const TurnBasedGame tb = random_turn_based(3, 4, 2, 3, rng);
  const LinearMixtureGame g = embed_turn_based(tb);
  validate(g);
  for (int s = 0; s < 4; ++s) {
    for (int h = 0; h < 3; ++h) {
      for (int a = 0; a < 2; ++a) {
        for (int sp = 0; sp < 4; ++sp) {
          if (tb.owner[s] == Owner::Max) {
            CHECK(transition_prob(g, h, s, a, 0, sp) == transition_prob(g, h, s, a, 1, sp));
          } else {
            CHECK(transition_prob(g, h, s, 0, a, sp) == transition_prob(g, h, s, 1, a, sp));
          }
        }
        if (tb.owner[s] == Owner::Max) {
          CHECK(g.reward(h, s, a, 0) == g.reward(h, s, a, 1));
        } else {
          CHECK(g.reward(h, s, 0, a) == g.reward(h, s, 1, a));
        }
      }
    }
  }
}

TEST_CASE("embedded turn-based game has the backward-induction optimal value") {
  Rng rng(88);
  const TurnBasedGame tb = random_turn_based(2, 3, 2, 3, rng);
  const LinearMixtureGame g = embed_turn_based(tb);
  const std::vector<double> oracle = oracles::turn_based_optimal_values(tb);
  const NashValues nash = nash_value(g);
  for (int s = 0; s < 3; ++s) {
    CHECK(nash.v.at(0, s) == doctest::Approx(oracle[s]).epsilon(1e-9));
  }
}

TEST_CASE("dummy-min embedding is opponent independent") {
  Rng rng(55);
  const LinearMixtureMdp mdp = random_mdp(2, 3, 2, 2, rng);
  const LinearMixtureGame g = make_dummy_min_player(mdp, 2);
  validate(g);
  for (int h = 0; h < 2; ++h) {
    for (int s = 0; s < 3; ++s) {
      for (int a = 0; a < 2; ++a) {
        for (int sp = 0; sp < 3; ++sp) {
          CHECK(transition_prob(g, h, s, a, 0, sp) == transition_prob(g, h, s, a, 1, sp));
        }
        CHECK(g.reward(h, s, a, 0) == g.reward(h, s, a, 1));
      }
    }
  }

  // Best responses reduce to the MDP values whatever the opponent does.
  const std::vector<double> opt = oracles::mdp_optimal_values(mdp);
  PolicyTable nu{2, 3, 2, std::vector<double>(12, 0.5)};
  const BestResponseValues br = best_response_value_max(g, nu);
  for (int s = 0; s < 3; ++s) CHECK(br.v.at(0, s) == doctest::Approx(opt[s]).epsilon(1e-9));

  PolicyTable nu_point{2, 3, 2, std::vector<double>(12, 0.0)};
  for (int h = 0; h < 2; ++h) {
    for (int s = 0; s < 3; ++s) nu_point.at(h, s, 1) = 1.0;
  }
  const BestResponseValues br2 = best_response_value_max(g, nu_point);
  for (int s = 0; s < 3; ++s) CHECK(br2.v.at(0, s) == doctest::Approx(opt[s]).epsilon(1e-9));
}

TEST_CASE("random_instance passes validation and is degenerate at d=1") {
  Rng rng(7);
  const LinearMixtureGame g = random_instance(1, 3, 2, 2, 2, rng);
  CHECK(g.theta[0][0] == doctest::Approx(1.0));
  // d=1: transition is the single basis kernel, scaled back by sqrt(d)=1.
  for (int s = 0; s < 3; ++s) {
    double row = 0.0;
    for (int sp = 0; sp < 3; ++sp) row += transition_prob(g, 0, s, 0, 0, sp);
    CHECK(row == doctest::Approx(1.0).epsilon(1e-9));
  }

  Rng rng2(9);
  const LinearMixtureGame big = random_instance(6, 4, 2, 2, 3, rng2);
  validate(big);
  // |phi_V| <= 1 on 100 random value functions.
  Rng vr(123);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(4);
    for (auto& x : v) x = 2.0 * vr.uniform() - 1.0;
    for (int s = 0; s < 4; ++s) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          CHECK(phi_v(big, v, s, a, b).norm() <= 1.0 + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("instance JSON round-trips value-exactly") {
  Rng rng(31);
  const Instance original = random_instance(3, 3, 2, 2, 2, rng);
  const std::string text = instance_to_json(original);
  const Instance reloaded = instance_from_json(text);
  const auto& a = std::get<LinearMixtureGame>(original);
  const auto& b = std::get<LinearMixtureGame>(reloaded);
  REQUIRE(a.features.size() == b.features.size());
  for (std::size_t i = 0; i < a.features.size(); ++i) CHECK(a.features[i] == b.features[i]);
  for (int h = 0; h < a.horizon; ++h) CHECK((a.theta[h] - b.theta[h]).norm() == 0.0);
  for (std::size_t i = 0; i < a.rewards.size(); ++i) CHECK(a.rewards[i] == b.rewards[i]);
  CHECK(a.param_bound == b.param_bound);
  // Serializing again yields identical bytes.
  CHECK(instance_to_json(reloaded) == text);

  Rng rng2(32);
  const Instance tb = random_turn_based(2, 3, 2, 2, rng2);
  const std::string tb_text = instance_to_json(tb);
  const Instance tb_back = instance_from_json(tb_text);
  CHECK(instance_to_json(tb_back) == tb_text);
  CHECK(std::get<TurnBasedGame>(tb_back).owner == std::get<TurnBasedGame>(tb).owner);
}

TEST_CASE("instance_from_json rejects malformed documents") {
  CHECK_THROWS_AS(instance_from_json("not json"), ConfigError);
  CHECK_THROWS_AS(instance_from_json("{\"kind\":\"simultaneous\"}"), ConfigError);
  CHECK_THROWS_AS(instance_from_json("{\"kind\":\"mystery\",\"dim\":1,\"num_states\":1,"
                                     "\"horizon\":1,\"features\":[],\"theta_star\":[],"
                                     "\"reward\":[],\"param_bound\":1}"),
                  ConfigError);
}
