/**
 * Browser entry point: build the client against the service URL and mount
 * the app. The service location defaults to the page origin and can be
 * overridden with `?api=http://host:port` for local development against
 * a separately started session service.
 */

import { SessionApi } from './api.js';
import { SessionController } from './controller.js';
import { mountApp } from './dom.js';

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get('api') ?? window.location.origin;

const root = document.getElementById('app');
if (root === null) {
  throw new Error('missing #app mount point');
}
mountApp(root, new SessionController(new SessionApi(baseUrl)));
