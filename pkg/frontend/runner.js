#!/usr/bin/env node
'use strict';

// Persistent evaluation context served over stdio, one JSON document per
// line in each direction. Requests carry {id, op, code?}; responses echo
// the id with {ok, value_repr | error}. Console output and unhandled
// promise rejections are forwarded out of band with id 0 so the client
// can print them as they arrive.

const readline = require('node:readline');
const util = require('node:util');
const vm = require('node:vm');
const { createRequire } = require('node:module');
const path = require('node:path');

const INSPECT_DEPTH = 2;
const INSPECT_CAP = 10000;

function send(doc) {
  process.stdout.write(JSON.stringify(doc) + '\n');
}

function emitOutOfBand(stream, text) {
  send({ id: 0, stream, text });
}

function inspectValue(value) {
  const text = util.inspect(value, { depth: INSPECT_DEPTH });
  return text.length > INSPECT_CAP ? text.slice(0, INSPECT_CAP) : text;
}

function serializeError(err) {
  // instanceof Error is unreliable across vm contexts; duck-type instead.
  const isErrorLike = err !== null && typeof err === 'object' &&
    typeof err.message === 'string' && typeof err.name === 'string';
  if (!isErrorLike) {
    return { name: 'Error', message: String(err), stack: String(err) };
  }
  let name = err.name || 'Error';
  if (err.code === 'MODULE_NOT_FOUND') {
    name = `${name} (MODULE_NOT_FOUND)`;
  }
  const message = err.message || '';
  const stack = (err.stack || `${name}: ${message}`).split('\n', 1)[0];
  return { name, message, stack };
}

function freshContext() {
  // Resolve modules relative to the working directory so packages
  // installed into the throwaway environment are visible.
  const contextRequire = createRequire(path.join(process.cwd(), '__repl__.js'));
  const sandboxConsole = {};
  for (const level of ['log', 'info', 'warn', 'error', 'debug']) {
    sandboxConsole[level] = (...args) => {
      emitOutOfBand('stdout', args.map((a) =>
        typeof a === 'string' ? a : inspectValue(a)).join(' '));
    };
  }
  const context = vm.createContext({
    require: contextRequire,
    console: sandboxConsole,
    module: { exports: {} },
    exports: {},
    process,
    Buffer,
    URL,
    URLSearchParams,
    TextEncoder,
    TextDecoder,
    setTimeout,
    setInterval,
    setImmediate,
    clearTimeout,
    clearInterval,
    clearImmediate,
    queueMicrotask,
  });
  context.globalThis = context;
  return context;
}

function serve() {
  let context = freshContext();
  let evaluating = false;

  process.on('unhandledRejection', (reason) => {
    const err = serializeError(reason);
    emitOutOfBand('stderr', `Unhandled rejection: ${err.name}: ${err.message}`);
  });

  const rl = readline.createInterface({ input: process.stdin, terminal: false });
  rl.on('line', (raw) => {
    if (!raw.trim()) {
      return;
    }
    let req;
    try {
      req = JSON.parse(raw);
    } catch (exc) {
      send({
        id: -1, ok: false,
        error: { name: 'ProtocolError', message: 'malformed request line',
                 stack: 'ProtocolError: malformed request line' },
      });
      return;
    }
    const id = typeof req.id === 'number' ? req.id : -1;
    switch (req.op) {
      case 'ping':
        send({ id, ok: true });
        break;
      case 'reset':
        context = freshContext();
        send({ id, ok: true });
        break;
      case 'shutdown':
        send({ id, ok: true });
        rl.close();
        process.exit(0);
        break;
      case 'eval': {
        if (typeof req.code !== 'string') {
          send({
            id, ok: false,
            error: { name: 'ProtocolError', message: 'eval requires code',
                     stack: 'ProtocolError: eval requires code' },
          });
          break;
        }
        if (evaluating) {
          send({
            id, ok: false,
            error: { name: 'ProtocolError',
                     message: 'an evaluation is already in flight',
                     stack: 'ProtocolError: an evaluation is already in flight' },
          });
          break;
        }
        evaluating = true;
        try {
          const value = vm.runInContext(req.code, context,
                                        { filename: '<repl>' });
          send({ id, ok: true, value_repr: inspectValue(value) });
        } catch (exc) {
          send({ id, ok: false, error: serializeError(exc) });
        } finally {
          evaluating = false;
        }
        break;
      }
      default:
        send({
          id, ok: false,
          error: { name: 'ProtocolError',
                   message: `unknown op ${JSON.stringify(req.op)}`,
                   stack: 'ProtocolError: unknown op' },
        });
    }
  });
}

if (require.main === module) {
  serve();
}

module.exports = { serve, inspectValue, serializeError, freshContext };
