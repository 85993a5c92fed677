// Copyright 2026 The afcmem Authors
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

#include "afcmem/csv.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

using namespace afc;

TEST(Csv, FormatRoundTrips)
{
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-308, 1e-6, 13.1e-6}) {
        const auto s = csv::format_double(v);
        EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
    }
    EXPECT_EQ(csv::format_double(0.5), "0.5");
    EXPECT_EQ(csv::format_double(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Csv, QuotesOnlyWhenNeeded)
{
    EXPECT_EQ(csv::quote("plain"), "plain");
    EXPECT_EQ(csv::quote("a,b"), "\"a,b\"");
    EXPECT_EQ(csv::quote("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(Csv, WriterEmitsCrlfRows)
{
    std::ostringstream out;
    csv::Writer w(out, {"time_s", "label"});
    w.row(std::vector<csv::Field>{1.5, std::string("x,y")});
    EXPECT_EQ(out.str(), "time_s,label\r\n1.5,\"x,y\"\r\n");
    EXPECT_THROW(w.row({1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST(Csv, ReadsNumericTablesAndSkipsComments)
{
    std::istringstream in("# note\r\na,b\r\n1,2\r\n3,4e-3\r\n");
    const auto t = csv::read_numeric(in);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.column("b"), 1u);
    EXPECT_DOUBLE_EQ(t.rows[1][1], 4e-3);
    EXPECT_THROW(t.column("c"), std::invalid_argument);

    std::istringstream bad("a,b\n1,x\n");
    EXPECT_THROW(csv::read_numeric(bad), std::invalid_argument);
}
