#include "disjinv/frontend.hpp"

#include "syntax.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace disjinv
{

std::vector< Variable > TransitionSystem::primed_state() const
{
    std::vector< Variable > out;
    for ( const auto& v : state )
        out.push_back( primed( v ) );
    return out;
}

std::vector< Variable > TransitionSystem::step_variables() const
{
    std::vector< Variable > out = state;
    for ( const auto& v : state )
        out.push_back( primed( v ) );
    out.insert( out.end(), inputs.begin(), inputs.end() );
    out.insert( out.end(), outputs.begin(), outputs.end() );
    return out;
}

namespace
{

using detail::Token;
using detail::TokenStream;

enum class Section
{
    Init,
    Guard,
    Trans,
    Post,
    Predicate,
    IoPredicate
};

const std::map< std::string, Section, std::less<> > section_names{
        { "init", Section::Init },           { "guard", Section::Guard },
        { "trans", Section::Trans },         { "post", Section::Post },
        { "predicate", Section::Predicate }, { "iopredicate", Section::IoPredicate } };

std::string section_label( Section s )
{
    for ( const auto& [ name, sec ] : section_names )
        if ( sec == s )
            return name;
    return "?";
}

class SectionScope final : public detail::Scope
{
public:
    SectionScope( const std::map< std::string, Variable >& vars, Section section ) : _vars{ vars }, _section{ section } {}

    Variable resolve( const Expr& e ) const override
    {
        auto it = _vars.find( e.name );
        if ( it == _vars.end() )
            throw UndeclaredVariable( "undeclared variable '" + e.name + "'", e.line, e.column );
        const Variable& v = it->second;
        if ( e.primed )
        {
            if ( _section != Section::Trans )
                throw ScopeError( "primed variable '" + e.name + "' outside trans", e.line, e.column );
            if ( v.kind != VarKind::State )
                throw ScopeError( "only state variables can be primed, '" + e.name + "' is " + to_string( v.kind ),
                                  e.line, e.column );
            return primed( v );
        }
        if ( !allowed( v.kind ) )
            throw ScopeError( to_string( v.kind ) + " variable '" + e.name + "' is not allowed in " + section_label( _section ),
                              e.line, e.column );
        return v;
    }

private:
    bool allowed( VarKind k ) const
    {
        switch ( _section )
        {
        case Section::Init:
        case Section::Post:
        case Section::Predicate: return k == VarKind::State;
        case Section::Guard: return k == VarKind::State || k == VarKind::Input;
        case Section::Trans: return true;
        case Section::IoPredicate: return k == VarKind::Input || k == VarKind::Output;
        }
        return false;
    }

    const std::map< std::string, Variable >& _vars;
    Section _section;
};

Sort parse_sort( TokenStream& ts )
{
    const Token& tok = ts.peek();
    const std::string name = tok.kind == Token::Kind::Ident ? tok.text : "";
    if ( name == "int" )
        return ts.next(), Sort::Int;
    if ( name == "real" )
        return ts.next(), Sort::Real;
    if ( name == "bool" )
        return ts.next(), Sort::Bool;
    ts.fail( "expected a sort (int, real or bool)" );
}

Formula frame( const Variable& v )
{
    if ( v.sort == Sort::Bool )
        return mk_iff( mk_bool( primed( v ) ), mk_bool( v ) );
    return mk_cmp( LinearExpr::of( primed( v ) ), CmpOp::Eq, LinearExpr::of( v ) );
}

std::string sort_keyword( Sort s )
{
    switch ( s )
    {
    case Sort::Int: return "int";
    case Sort::Real: return "real";
    case Sort::Bool: return "bool";
    }
    return "?";
}

} // namespace

TransitionSystem parse_transition_system( std::string_view text )
{
    TokenStream ts{ detail::tokenize( text ) };
    TransitionSystem sys;
    sys.name = "system";
    if ( ts.accept( "system" ) )
    {
        sys.name = ts.expect_ident();
        ts.accept( ";" );
    }

    std::map< std::string, Variable > vars;
    std::vector< std::pair< Section, ExprPtr > > sections;
    while ( !ts.at_end() )
    {
        const Token& head = ts.peek();
        if ( head.kind != Token::Kind::Ident )
            ts.fail( "expected a declaration or a section" );
        if ( head.text == "state" || head.text == "input" || head.text == "output" )
        {
            const VarKind kind = head.text == "state" ? VarKind::State : head.text == "input" ? VarKind::Input : VarKind::Output;
            ts.next();
            std::vector< Token > names;
            do
            {
                names.push_back( ts.peek() );
                ts.expect_ident();
            } while ( ts.accept( "," ) );
            ts.expect( ":" );
            const Sort sort = parse_sort( ts );
            ts.expect( ";" );
            for ( const auto& tok : names )
            {
                if ( section_names.contains( tok.text ) || tok.text == "system" || tok.text == "state" ||
                     tok.text == "input" || tok.text == "output" )
                    throw SyntaxError( "'" + tok.text + "' is a keyword", tok.line, tok.column );
                const Variable v{ tok.text, sort, kind };
                if ( !vars.emplace( tok.text, v ).second )
                    throw DuplicateDefinition( "variable '" + tok.text + "' declared twice", tok.line, tok.column );
                ( kind == VarKind::State ? sys.state : kind == VarKind::Input ? sys.inputs : sys.outputs ).push_back( v );
            }
            continue;
        }
        auto sec = section_names.find( head.text );
        if ( sec == section_names.end() )
            ts.fail( "expected a declaration or a section but found '" + head.text + "'" );
        ts.next();
        ts.expect( ":" );
        sections.emplace_back( sec->second, ts.expression( false ) );
        ts.expect( ";" );
    }

    std::map< Section, std::vector< Formula > > parts;
    for ( const auto& [ section, expr ] : sections )
    {
        const Formula f = detail::elaborate_bool( *expr, SectionScope{ vars, section } );
        if ( section == Section::Predicate )
            sys.state_preds.push_back( f );
        else if ( section == Section::IoPredicate )
            sys.io_preds.push_back( f );
        else
            parts[ section ].push_back( f );
    }
    sys.init = mk_and( parts[ Section::Init ] );
    sys.guard = mk_and( parts[ Section::Guard ] );
    sys.post = mk_and( parts[ Section::Post ] );

    std::vector< Formula > trans = parts[ Section::Trans ];
    std::set< std::string > primed_names;
    for ( const auto& f : trans )
        for ( const auto& v : free_variables( f ) )
            if ( v.kind == VarKind::Primed )
                primed_names.insert( v.name );
    for ( const auto& v : sys.state )
        if ( !primed_names.contains( primed( v ).name ) )
            trans.push_back( frame( v ) );
    sys.trans = mk_and( std::move( trans ) );
    return sys;
}

std::string print_transition_system( const TransitionSystem& ts )
{
    std::ostringstream out;
    out << "system " << ts.name << "\n";
    auto decls = [ & ]( const char* keyword, const std::vector< Variable >& vs ) {
        for ( const auto& v : vs )
            out << keyword << " " << v.name << " : " << sort_keyword( v.sort ) << ";\n";
    };
    decls( "state", ts.state );
    decls( "input", ts.inputs );
    decls( "output", ts.outputs );
    out << "init: " << to_string( ts.init ) << ";\n";
    out << "guard: " << to_string( ts.guard ) << ";\n";
    out << "trans: " << to_string( ts.trans ) << ";\n";
    out << "post: " << to_string( ts.post ) << ";\n";
    for ( const auto& p : ts.state_preds )
        out << "predicate: " << to_string( p ) << ";\n";
    for ( const auto& p : ts.io_preds )
        out << "iopredicate: " << to_string( p ) << ";\n";
    return out.str();
}

TransitionSystem load_system( const std::filesystem::path& path )
{
    std::ifstream in( path );
    if ( !in )
        throw Error( "cannot read '" + path.string() + "'" );
    std::stringstream ss;
    ss << in.rdbuf();
    const auto ext = path.extension().string();
    if ( ext == ".node" || ext == ".lus" )
        return node_to_transition_system( parse_node( ss.str() ) );
    return parse_transition_system( ss.str() );
}

} // namespace disjinv
