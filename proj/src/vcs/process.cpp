#include "vercheck/vcs/process.hpp"

#include "vercheck/core/error.hpp"

#include <future>

#include <boost/asio/buffer.hpp>
#include <boost/asio/io_context.hpp>
#include <boost/process.hpp>
#include <fmt/format.h>

namespace vercheck::vcs {

namespace bp = boost::process;

ProcessResult run_process(const std::string& program, const std::vector<std::string>& args, const std::string& stdin_data)
{
    boost::filesystem::path exe = program;
    if (program.find('/') == std::string::npos) {
        exe = bp::search_path(program);
        if (exe.empty())
            throw RepositoryError(fmt::format("'{}' not found on PATH", program));
    }

    ProcessResult result;
    try {
        boost::asio::io_context io;
        std::future<std::string> out;
        std::future<std::string> err;
        bp::child child(exe, bp::args(args), bp::std_in < boost::asio::buffer(stdin_data), bp::std_out > out,
            bp::std_err > err, io);
        io.run();
        child.wait();
        result.exit_code = child.exit_code();
        result.out = out.get();
        result.err = err.get();
    } catch (const bp::process_error& e) {
        throw RepositoryError(fmt::format("cannot run '{}': {}", program, e.what()));
    }
    return result;
}

}
