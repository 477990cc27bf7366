// Regenerates the synthetic fixtures under data/fixtures/.
//
//   entrovel_gen_fixtures <output-dir>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "entrovel/series.hpp"
#include "entrovel/synthetic.hpp"

namespace {

void write(const std::filesystem::path& dir, const entrovel::AnnualSeries& s) {
    // Ten significant digits keep fitted rate constants within 1e-9 of the injected ones.
    std::ofstream out(dir / (s.name() + ".csv"), std::ios::binary | std::ios::trunc);
    out << "year,value\n";
    char buf[64];
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%d,%.10g\n", s.year_of(i), s.observations()[i].value);
        out << buf;
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: entrovel_gen_fixtures <output-dir>\n";
        return 2;
    }
    namespace syn = entrovel::synthetic;
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);

    // 2001-2019 noiseless series carrying the published rate constants.
    write(dir, syn::exponential("money", 2001, 19, 7.5805, 0.0555));
    write(dir, syn::exponential("gdp", 2001, 19, 13.2626, 0.0197));
    write(dir, syn::exponential("homeprice", 2001, 19, 117.4, 0.0320));
    write(dir, syn::exponential("russell", 2001, 19, 488.5, 0.0624));
    write(dir, syn::exponential("sp500", 2001, 19, 1148.1, 0.0358));
    write(dir, syn::exponential("nasdaq", 2001, 19, 1950.4, 0.0878));
    write(dir, syn::exponential("cpi", 2001, 19, 177.1, 0.0203));
    write(dir, syn::exponential("sp500_long", 1928, 92, 17.66, 0.0652));
    write(dir, syn::exponential("flat", 2001, 11, 5.0, 0.0));
    write(dir, syn::crisis("crisis", 2001, 19, 100.0, 0.05, 7, 0.6, 4));
    return 0;
}
