#include <iostream>
#include <memory>

#include "entrovel/cli.hpp"
#include "entrovel/http_transport.hpp"

int main(int argc, char** argv) {
    return entrovel::run_cli(argc, argv, std::cout, std::cerr,
                             [] { return std::make_unique<entrovel::HttpTransport>(); });
}
