// Latest-wins request gate for the slider path: at most one request is in
// flight; while it runs, newer submissions replace each other and only the
// newest runs next. Superseded submissions resolve to undefined so callers
// can ignore stale results.
export class LatestWins {
    constructor() {
        this.busy = false;
        this.pending = null;
        /** peak concurrency actually observed; stays at 1 when used correctly */
        this.maxObservedInflight = 0;
        this.inflightNow = 0;
    }
    submit(task) {
        if (this.busy) {
            // replace whatever was queued; the replaced caller sees undefined
            this.pending?.resolve(undefined);
            return new Promise((resolve, reject) => {
                this.pending = { task, resolve, reject };
            });
        }
        this.busy = true;
        return this.run(task);
    }
    async run(task) {
        this.inflightNow += 1;
        this.maxObservedInflight = Math.max(this.maxObservedInflight, this.inflightNow);
        try {
            return await task();
        }
        finally {
            this.inflightNow -= 1;
            const next = this.pending;
            this.pending = null;
            if (next) {
                this.run(next.task).then(next.resolve, next.reject);
            }
            else {
                this.busy = false;
            }
        }
    }
    get inflight() {
        return this.inflightNow;
    }
}
