package com.example.net;

import com.example.core.Logger;

public class HttpClient {
    private Logger logger;

    public HttpClient() {
        this.logger = new Logger("net");
    }

    public String fetch(String url) {
        logger.log("fetching " + url);
        return NetworkUtil.get(url);
    }
}
