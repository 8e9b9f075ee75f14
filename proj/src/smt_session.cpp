#include "backends.hpp"
#include "smtlib.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <csignal>
#include <cstring>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace disjinv::detail
{

namespace
{

std::vector< std::string > split_command( const std::string& cmd )
{
    std::vector< std::string > argv;
    std::istringstream is( cmd );
    for ( std::string word; is >> word; )
        argv.push_back( word );
    return argv;
}

// A solver subprocess speaking SMT-LIB2 over pipes.
class SolverProcess
{
public:
    explicit SolverProcess( const std::string& command )
    {
        static const bool sigpipe_ignored = [] {
            std::signal( SIGPIPE, SIG_IGN );
            return true;
        }();
        (void)sigpipe_ignored;

        const auto argv = split_command( command );
        if ( argv.empty() )
            throw SolverSpawnError( "empty solver command" );

        int to_child[ 2 ], from_child[ 2 ], exec_status[ 2 ];
        if ( pipe2( to_child, O_CLOEXEC ) || pipe2( from_child, O_CLOEXEC ) || pipe2( exec_status, O_CLOEXEC ) )
            throw SolverSpawnError( std::string( "pipe: " ) + std::strerror( errno ) );

        _pid = fork();
        if ( _pid < 0 )
            throw SolverSpawnError( std::string( "fork: " ) + std::strerror( errno ) );
        if ( _pid == 0 )
        {
            dup2( to_child[ 0 ], STDIN_FILENO );
            dup2( from_child[ 1 ], STDOUT_FILENO );
            std::vector< char* > cargv;
            for ( const auto& a : argv )
                cargv.push_back( const_cast< char* >( a.c_str() ) );
            cargv.push_back( nullptr );
            execvp( cargv[ 0 ], cargv.data() );
            const int err = errno;
            [[maybe_unused]] auto n = write( exec_status[ 1 ], &err, sizeof err );
            _exit( 127 );
        }

        close( to_child[ 0 ] );
        close( from_child[ 1 ] );
        close( exec_status[ 1 ] );
        _in = to_child[ 1 ];
        _out = from_child[ 0 ];

        int err = 0;
        const auto n = read( exec_status[ 0 ], &err, sizeof err );
        close( exec_status[ 0 ] );
        if ( n == static_cast< ssize_t >( sizeof err ) )
        {
            reap( true );
            throw SolverSpawnError( "cannot run solver '" + argv[ 0 ] + "': " + std::strerror( err ) );
        }
    }

    ~SolverProcess()
    {
        if ( _pid > 0 && alive() )
        {
            const std::string bye = "(exit)\n";
            [[maybe_unused]] auto n = write( _in, bye.data(), bye.size() );
        }
        reap( false );
    }

    SolverProcess( const SolverProcess& ) = delete;
    SolverProcess& operator=( const SolverProcess& ) = delete;

    [[nodiscard]] bool alive() const { return _in >= 0; }

    void send( const std::string& line )
    {
        if ( !alive() )
            throw SolverCrashed( "solver session is no longer usable" );
        const std::string data = line + "\n";
        std::size_t off = 0;
        while ( off < data.size() )
        {
            const auto n = write( _in, data.data() + off, data.size() - off );
            if ( n < 0 )
            {
                if ( errno == EINTR )
                    continue;
                kill_now();
                throw SolverCrashed( "solver process closed its input" );
            }
            off += static_cast< std::size_t >( n );
        }
    }

    // Reads one complete s-expression or token. Returns false on timeout.
    bool receive( std::string& out, double timeout_s )
    {
        out.clear();
        int depth = 0;
        bool started = false, in_quote = false, in_string = false;
        while ( true )
        {
            while ( _pos < _buffer.size() )
            {
                const char c = _buffer[ _pos++ ];
                if ( !started )
                {
                    if ( std::isspace( static_cast< unsigned char >( c ) ) )
                        continue;
                    started = true;
                }
                out += c;
                if ( in_quote )
                {
                    in_quote = c != '|';
                    continue;
                }
                if ( in_string )
                {
                    in_string = c != '"';
                    continue;
                }
                if ( c == '|' )
                    in_quote = true;
                else if ( c == '"' )
                    in_string = true;
                else if ( c == '(' )
                    ++depth;
                else if ( c == ')' )
                    --depth;
                if ( depth == 0 && ( c == ')' || std::isspace( static_cast< unsigned char >( c ) ) ) )
                {
                    while ( !out.empty() && std::isspace( static_cast< unsigned char >( out.back() ) ) )
                        out.pop_back();
                    return true;
                }
            }
            _buffer.clear();
            _pos = 0;
            if ( !fill( timeout_s ) )
                return false;
        }
    }

    void kill_now()
    {
        if ( _pid > 0 )
            ::kill( _pid, SIGKILL );
        reap( true );
    }

private:
    bool fill( double timeout_s )
    {
        if ( !alive() )
            throw SolverCrashed( "solver session is no longer usable" );
        pollfd pfd{ _out, POLLIN, 0 };
        const int ms = timeout_s > 0 ? static_cast< int >( timeout_s * 1000.0 ) : -1;
        int rc;
        do
            rc = poll( &pfd, 1, ms );
        while ( rc < 0 && errno == EINTR );
        if ( rc == 0 )
            return false;
        char chunk[ 4096 ];
        ssize_t n;
        do
            n = read( _out, chunk, sizeof chunk );
        while ( n < 0 && errno == EINTR );
        if ( n <= 0 )
        {
            kill_now();
            throw SolverCrashed( "solver process terminated unexpectedly" );
        }
        _buffer.append( chunk, static_cast< std::size_t >( n ) );
        return true;
    }

    void reap( bool force )
    {
        if ( _in >= 0 )
            close( _in );
        if ( _out >= 0 )
            close( _out );
        _in = _out = -1;
        if ( _pid <= 0 )
            return;
        int status = 0;
        for ( int attempt = 0; attempt < 50; ++attempt )
        {
            if ( waitpid( _pid, &status, WNOHANG ) != 0 )
            {
                _pid = -1;
                return;
            }
            if ( force )
                break;
            usleep( 2000 );
        }
        ::kill( _pid, SIGKILL );
        waitpid( _pid, &status, 0 );
        _pid = -1;
    }

    pid_t _pid = -1;
    int _in = -1;
    int _out = -1;
    std::string _buffer;
    std::size_t _pos = 0;
};

class SmtSession final : public Session
{
public:
    SmtSession( const SolverConfig& cfg, Logic logic ) : Session{ cfg }, _proc{ cfg.command }, _logic{ logic }
    {
        command( "(set-option :print-success true)" );
        command( "(set-option :produce-models true)" );
        if ( cfg.seed )
            command( "(set-option :random-seed " + std::to_string( *cfg.seed ) + ")" );
        command( "(set-logic " + to_string( logic ) + ")" );
    }

protected:
    void do_declare( const Variable& v ) override
    {
        if ( ( _logic == Logic::QF_LIA && v.sort == Sort::Real ) || ( _logic == Logic::QF_LRA && v.sort == Sort::Int ) )
            throw UnsupportedSort( "variable '" + v.name + "' of sort " + to_string( v.sort ) + " in logic " +
                                   to_string( _logic ) );
        command( "(declare-const " + smtlib::quote( v.name ) + " " + smtlib::sort_name( v.sort ) + ")" );
    }

    void do_assert( const Formula& f ) override { command( "(assert " + to_smtlib( f ) + ")" ); }
    void do_push() override { command( "(push 1)" ); }
    void do_pop() override { command( "(pop 1)" ); }

    SatResult do_check() override
    {
        _proc.send( "(check-sat)" );
        std::string reply;
        if ( !_proc.receive( reply, config().timeout ) )
        {
            _proc.kill_now();
            return SatResult{ SatResult::Status::Unknown, {}, "timeout" };
        }
        if ( reply == "unsat" )
            return SatResult{ SatResult::Status::Unsat, {}, {} };
        if ( reply == "unknown" )
            return SatResult{ SatResult::Status::Unknown, {}, "solver returned unknown" };
        if ( reply != "sat" )
            throw SolverError( "unexpected check-sat reply: " + reply );

        SatResult res{ SatResult::Status::Sat, {}, {} };
        const auto& vars = declared();
        constexpr std::size_t batch = 64;
        for ( std::size_t start = 0; start < vars.size(); start += batch )
        {
            const std::size_t end = std::min( vars.size(), start + batch );
            std::string q = "(get-value (";
            for ( std::size_t k = start; k < end; ++k )
                q += ( k > start ? " " : "" ) + smtlib::quote( vars[ k ].name );
            q += "))";
            _proc.send( q );
            const auto e = smtlib::parse( expect_reply() );
            if ( !e.is_list || e.list.size() != end - start )
                throw SolverError( "malformed get-value reply" );
            for ( std::size_t k = start; k < end; ++k )
            {
                const auto& pair = e.list[ k - start ];
                if ( !pair.is_list || pair.list.size() != 2 )
                    throw SolverError( "malformed get-value entry" );
                res.model.emplace( vars[ k ].name, smtlib::parse_value( pair.list[ 1 ], vars[ k ].sort ) );
            }
        }
        return res;
    }

private:
    std::string expect_reply()
    {
        std::string reply;
        if ( !_proc.receive( reply, config().timeout > 0 ? std::max( config().timeout, 5.0 ) : 0 ) )
        {
            _proc.kill_now();
            throw SolverCrashed( "solver stopped responding" );
        }
        if ( reply.rfind( "(error", 0 ) == 0 )
            throw SolverError( "solver error: " + reply );
        return reply;
    }

    void command( const std::string& cmd )
    {
        _proc.send( cmd );
        const auto reply = expect_reply();
        if ( reply != "success" )
            throw SolverError( "unexpected reply to " + cmd + ": " + reply );
    }

    SolverProcess _proc;
    Logic _logic;
};

} // namespace

std::unique_ptr< Session > make_smt_session( const SolverConfig& cfg, Logic logic )
{
    return std::make_unique< SmtSession >( cfg, logic );
}

} // namespace disjinv::detail
