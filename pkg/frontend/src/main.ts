// Browser bootstrap.  Point the page at a service with
// ?service=http://host:port (defaults to port 8737 on this host).

import { ApiClient } from './api.js';
import { Workbench } from './workbench.js';

const params = new URLSearchParams(window.location.search);
const service =
    params.get('service') ?? `${window.location.protocol}//${window.location.hostname}:8737`;

const root = document.getElementById('workbench');
if (!root) throw new Error('page is missing the #workbench element');

const workbench = new Workbench(new ApiClient(service), root, {
    lexicon: params.get('lexicon') ?? 'work',
    annotator: params.get('annotator') ?? '',
});

const word = params.get('word');
if (word) void workbench.loadWord(word);
