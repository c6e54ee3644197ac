#include <exception>
#include <iostream>

#include "jain/cli.hpp"
#include "jain/errors.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    const jain::cli::RunConfig config = jain::cli::parse_args(args);
    return jain::cli::run(config);
  } catch (const jain::cli::HelpRequested& e) {
    std::cout << e.what();
    return 0;
  } catch (const jain::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const jain::TruncationError& e) {
    std::cerr << "truncation failure: " << e.what()
              << " (partial sum " << e.partial_sum << ")\n";
    return 3;
  } catch (const jain::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
