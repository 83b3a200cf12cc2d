// Copyright 2026 The GNM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gnm/metrics.hpp"

using namespace gnm;

using Labels = std::vector<std::size_t>;
using Values = std::vector<double>;

TEST_CASE("accuracy") {
  CHECK(accuracy(Labels{0, 1, 2}, Labels{0, 1, 1}) == doctest::Approx(2.0 / 3.0));
  CHECK(accuracy(Labels{1, 1}, Labels{1, 1}) == 1.0);
  CHECK_THROWS(accuracy(Labels{}, Labels{}));
  CHECK_THROWS(accuracy(Labels{0}, Labels{0, 1}));
}

TEST_CASE("macro F1") {
  CHECK(macro_f1(Labels{0, 1, 0, 1}, Labels{0, 0, 1, 1}, 2) == doctest::Approx(0.5));
  // class 0: 2/3, class 1: 0.8
  CHECK(macro_f1(Labels{0, 0, 1, 1}, Labels{0, 1, 1, 1}, 2) ==
        doctest::Approx((2.0 / 3.0 + 0.8) / 2.0));
  CHECK(macro_f1(Labels{0, 1, 0, 1}, Labels{0, 0, 1, 1}, 3) == doctest::Approx(0.5));
  // class 2 is predicted but never true: it scores 0 and counts.
  CHECK(macro_f1(Labels{0, 1, 2}, Labels{0, 1, 1}, 3) == doctest::Approx((1.0 + 2.0 / 3.0) / 3.0));
  CHECK(macro_f1(Labels{2, 2}, Labels{2, 2}, 3) == 1.0);
  CHECK_THROWS(macro_f1(Labels{0, 3}, Labels{0, 1}, 3));
}

TEST_CASE("regression metrics") {
  CHECK(mse(Values{1, 2}, Values{0, 0}) == doctest::Approx(2.5));
  CHECK(r2(Values{1, 2, 3}, Values{1, 2, 3}) == 1.0);
  CHECK(r2(Values{2, 2, 2}, Values{1, 2, 3}) == doctest::Approx(0.0));
  CHECK(r2(Values{3, 2, 1}, Values{1, 2, 3}) == doctest::Approx(-3.0));
  CHECK_THROWS(r2(Values{1, 2}, Values{4, 4}));
}

TEST_CASE("mean and population std") {
  const MeanStd s = mean_std(Values{2, 4, 4, 4, 5, 5, 7, 9});
  CHECK(s.mean == doctest::Approx(5.0));
  CHECK(s.stddev == doctest::Approx(2.0));
  CHECK(mean_std(Values{3}).stddev == 0.0);
}

TEST_CASE("report table and csv") {
  EvalReport rep;
  rep.add("GNM", {{1.0, 1.0}, {0.5, 0.25}});
  rep.add("MLP", {{0.75, 0.5}, {0.75, 0.5}});
  CHECK(rep.summary(0, false).mean == doctest::Approx(0.75));
  CHECK(rep.summary(0, true).stddev == doctest::Approx(0.375));
  const std::string table = rep.to_table();
  CHECK(table.find("Accuracy") != std::string::npos);
  CHECK(table.find("Macro F1") != std::string::npos);
  CHECK(table.find("0.7500 +- 0.2500") != std::string::npos);
  CHECK(table.find("0.7500 +- 0.0000") != std::string::npos);
  const std::string csv = rep.to_csv();
  CHECK(csv.rfind("model,fold,accuracy,macro_f1\nGNM,1,1,1\nGNM,2,0.5,0.25\nGNM,mean,0.75,0.625\n",
                  0) == 0);
  CHECK(csv.find("MLP,std,0,0\n") != std::string::npos);

  EvalReport reg;
  reg.task = TaskKind::regression;
  reg.add("GNM", {{0.1, 0.9}});
  CHECK(reg.to_table().find("R2") != std::string::npos);
  CHECK(reg.to_csv().rfind("model,fold,mse,r2\n", 0) == 0);
}
